#include "mcout/mcse.hpp"

#include <cmath>
#include <string>

#include "mcout/errors.hpp"

namespace mcout {

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::BatchMeans: return "batch-means";
        case EstimatorKind::FlatTop: return "flat-top";
        case EstimatorKind::SampleCov: return "sample-cov";
    }
    return "unknown";
}

EstimatorKind estimator_kind_from_string(std::string_view name) {
    if (name == "batch-means") return EstimatorKind::BatchMeans;
    if (name == "flat-top") return EstimatorKind::FlatTop;
    if (name == "sample-cov") return EstimatorKind::SampleCov;
    throw ParameterError("unknown estimator kind: " + std::string(name));
}

CovarianceEstimate::CovarianceEstimate(Eigen::MatrixXd m, EstimatorKind k, std::size_t b,
                                       std::size_t n)
    : matrix(std::move(m)), kind(k), batch_size(b), n_used(n) {
    if (matrix.rows() != matrix.cols()) throw DimensionError("covariance must be square");
    matrix = 0.5 * (matrix + matrix.transpose()).eval();
    positive_definite = log_det_spd(matrix).has_value();
}

std::optional<double> log_det_spd(const Eigen::MatrixXd& a) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const auto diag = llt.matrixLLT().diagonal();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (!(diag(i) > 0.0)) return std::nullopt;
        log_det += 2.0 * std::log(diag(i));
    }
    return log_det;
}

CovarianceEstimate batch_means_sigma(const ChainMatrix& chain, std::size_t b) {
    if (b == 0) throw ParameterError("batch size must be >= 1");
    const std::size_t n = chain.rows();
    const std::size_t a = n / b;
    if (a < 2) {
        throw InsufficientDataError("batch means needs at least 2 batches (n = " +
                                    std::to_string(n) + ", b = " + std::to_string(b) + ")");
    }
    const auto p = static_cast<Eigen::Index>(chain.cols());
    const auto x = chain.matrix();

    Eigen::MatrixXd batch_means(static_cast<Eigen::Index>(a), p);
    for (std::size_t k = 0; k < a; ++k) {
        batch_means.row(static_cast<Eigen::Index>(k)) =
            x.middleRows(static_cast<Eigen::Index>(k * b), static_cast<Eigen::Index>(b))
                .colwise()
                .mean();
    }
    const Eigen::RowVectorXd grand = batch_means.colwise().mean();
    const Eigen::MatrixXd centered = batch_means.rowwise() - grand;
    Eigen::MatrixXd sigma = centered.transpose() * centered;
    sigma *= static_cast<double>(b);
    sigma /= static_cast<double>(a - 1);
    return {std::move(sigma), EstimatorKind::BatchMeans, b, a * b};
}

CovarianceEstimate flat_top_sigma(const ChainMatrix& chain, std::size_t b) {
    if (b < 2 || b % 2 != 0) throw ParameterError("flat-top batch size must be even and >= 2");
    if (chain.rows() < 2 * b) throw InsufficientDataError("flat-top needs n >= 2b");
    const auto full = batch_means_sigma(chain, b);
    const auto half = batch_means_sigma(chain, b / 2);
    Eigen::MatrixXd combined = 2.0 * full.matrix - half.matrix;
    return {std::move(combined), EstimatorKind::FlatTop, b, full.n_used};
}

CovarianceEstimate sample_cov_lambda(const ChainMatrix& chain) {
    const std::size_t n = chain.rows();
    if (n < 2) throw InsufficientDataError("sample covariance needs n >= 2");
    const auto x = chain.matrix();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    Eigen::MatrixXd lambda = centered.transpose() * centered;
    lambda /= static_cast<double>(n);
    return {std::move(lambda), EstimatorKind::SampleCov, 0, n};
}

std::size_t default_batch_size(std::size_t n) {
    if (n < 8) throw InsufficientDataError("default batch size needs n >= 8");
    auto b = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
    // cbrt may land one off for perfect cubes; settle on the exact integer root.
    while ((b + 1) * (b + 1) * (b + 1) <= n) ++b;
    while (b * b * b > n) --b;
    b -= b % 2;
    return b < 2 ? 2 : b;
}

std::string_view to_string(BatchRule rule) {
    return rule == BatchRule::CubeRoot ? "cube-root" : "square-root";
}

BatchRule batch_rule_from_string(std::string_view name) {
    if (name == "cube-root" || name == "cuberoot") return BatchRule::CubeRoot;
    if (name == "square-root" || name == "sqroot" || name == "sqrt") return BatchRule::SquareRoot;
    throw ParameterError("unknown batch rule: " + std::string(name));
}

std::size_t batch_size_for(std::size_t n, BatchRule rule) {
    if (rule == BatchRule::CubeRoot) return default_batch_size(n);
    if (n < 8) throw InsufficientDataError("batch size selection needs n >= 8");
    auto b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while ((b + 1) * (b + 1) <= n) ++b;
    while (b * b > n) --b;
    b -= b % 2;
    return b < 2 ? 2 : b;
}

CorrelogramSeries correlogram(const ChainMatrix& chain, std::size_t max_lag, std::size_t col_i,
                              std::size_t col_j) {
    const std::size_t n = chain.rows();
    if (col_i >= chain.cols() || col_j >= chain.cols()) {
        throw DimensionError("correlogram column out of range");
    }
    if (max_lag >= n) throw ParameterError("max lag must be < n");

    const auto x = chain.column(col_i);
    const auto y = chain.column(col_j);
    auto centre = [n](std::vector<double> v) {
        double mean = 0.0;
        for (double e : v) mean += e;
        mean /= static_cast<double>(n);
        for (double& e : v) e -= mean;
        return v;
    };
    const auto xc = centre(x);
    const auto yc = centre(y);

    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        var_x += xc[t] * xc[t];
        var_y += yc[t] * yc[t];
    }
    var_x /= static_cast<double>(n);
    var_y /= static_cast<double>(n);
    if (!(var_x > 0.0) || !(var_y > 0.0)) {
        throw DegenerateDataError("correlogram of a constant column");
    }
    // sqrt(v * v) == v exactly, so the ACF at lag 0 is exactly 1.
    const double denom = std::sqrt(var_x * var_y);

    CorrelogramSeries out{col_i, col_j, std::vector<double>(max_lag + 1)};
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) acc += xc[t] * yc[t + k];
        out.values[k] = acc / static_cast<double>(n) / denom;
    }
    return out;
}

}  // namespace mcout
