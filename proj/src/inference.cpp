#include "mcout/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mcout/distributions.hpp"
#include "mcout/errors.hpp"

namespace mcout {

namespace {

void check_level(double alpha, const char* name) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ParameterError(std::string(name) + " must lie in (0, 1)");
    }
}

}  // namespace

double ess(std::size_t n, const CovarianceEstimate& lambda, const CovarianceEstimate& sigma) {
    if (lambda.dim() != sigma.dim()) throw DimensionError("lambda and sigma differ in dimension");
    const auto log_lambda = log_det_spd(lambda.matrix);
    if (!log_lambda) throw SingularEstimateError("lambda estimate is not positive definite");
    const auto log_sigma = log_det_spd(sigma.matrix);
    if (!log_sigma) throw SingularEstimateError("sigma estimate is not positive definite");
    const auto p = static_cast<double>(lambda.dim());
    return static_cast<double>(n) * std::exp((*log_lambda - *log_sigma) / p);
}

EssCutoff min_ess_cutoff(double alpha, double epsilon, std::size_t p) {
    check_level(alpha, "alpha");
    check_level(epsilon, "epsilon");
    if (p == 0) throw ParameterError("dimension p must be >= 1");
    const auto pd = static_cast<double>(p);
    const double log_const = (2.0 / pd) * std::numbers::ln2 + std::log(std::numbers::pi) -
                             (2.0 / pd) * (std::log(pd) + std::lgamma(pd / 2.0));
    const double chi2 = chi2_quantile(1.0 - alpha, pd);
    const double value = std::exp(log_const) * chi2 / (epsilon * epsilon);
    return {value, static_cast<std::size_t>(std::llround(value))};
}

double rhat_from_ess(double ess_value) {
    if (!(ess_value > 0.0)) throw ParameterError("ESS must be positive");
    return std::sqrt(1.0 + 1.0 / ess_value);
}

double rhat_cutoff(double cutoff) { return rhat_from_ess(cutoff); }

bool rhat_rule_terminates(double rhat, double cutoff) { return rhat <= rhat_cutoff(cutoff); }

double ConfidenceRegion::quadratic_form(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd d = x - center;
    return d.dot(shape.llt().solve(d));
}

double ConfidenceRegion::half_width(std::size_t i) const {
    return std::sqrt(hotelling_t2 * shape(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
}

double hotelling_t2_quantile(double alpha, std::size_t p, std::size_t q) {
    check_level(alpha, "alpha");
    if (p == 0) throw ParameterError("dimension p must be >= 1");
    if (q <= p) {
        throw DegreesOfFreedomError("Hotelling degrees of freedom q = " + std::to_string(q) +
                                    " must exceed p = " + std::to_string(p));
    }
    const auto pd = static_cast<double>(p);
    const auto qd = static_cast<double>(q);
    const double d2 = qd - pd + 1.0;
    return qd * pd / d2 * f_quantile(1.0 - alpha, pd, d2);
}

std::size_t hotelling_dof(const CovarianceEstimate& sigma) {
    const std::size_t a =
        sigma.batch_size == 0 ? sigma.n_used : sigma.n_used / sigma.batch_size;
    const std::size_t p = sigma.dim();
    if (a <= p) {
        throw DegreesOfFreedomError("too few batches (" + std::to_string(a) +
                                    ") for a Hotelling region in dimension " + std::to_string(p));
    }
    return a - p;
}

ConfidenceRegion hotelling_region(const Eigen::VectorXd& mean, const CovarianceEstimate& sigma,
                                  std::size_t n, double alpha, std::size_t q) {
    const std::size_t p = sigma.dim();
    if (static_cast<std::size_t>(mean.size()) != p) {
        throw DimensionError("mean and sigma differ in dimension");
    }
    if (n == 0) throw InsufficientDataError("region needs n >= 1");
    const double t2 = hotelling_t2_quantile(alpha, p, q);
    const auto log_det = log_det_spd(sigma.matrix);
    if (!log_det) throw SingularEstimateError("sigma estimate is not positive definite");

    ConfidenceRegion region;
    region.center = mean;
    region.shape = sigma.matrix / static_cast<double>(n);
    region.hotelling_t2 = t2;
    region.df = q;
    region.alpha = alpha;

    const auto pd = static_cast<double>(p);
    const double log_unit_ball =
        std::log(2.0) + 0.5 * pd * std::log(std::numbers::pi) - std::log(pd) - std::lgamma(pd / 2.0);
    region.volume = std::exp(log_unit_ball + 0.5 * pd * std::log(t2 / static_cast<double>(n)) +
                             0.5 * *log_det);

    if (p == 2) {
        const Eigen::Matrix2d lower = Eigen::Matrix2d(region.shape).llt().matrixL();
        const double radius = std::sqrt(t2);
        region.boundary.reserve(kRegionBoundaryPoints);
        for (std::size_t k = 0; k < kRegionBoundaryPoints; ++k) {
            const double theta =
                2.0 * std::numbers::pi * static_cast<double>(k) / kRegionBoundaryPoints;
            const Eigen::Vector2d unit(std::cos(theta), std::sin(theta));
            region.boundary.emplace_back(Eigen::Vector2d(mean) + radius * lower * unit);
        }
    }
    return region;
}

void StoppingConfig::validate() const {
    check_level(alpha, "alpha");
    check_level(epsilon, "epsilon");
    if (p == 0) throw ParameterError("dimension p must be >= 1");
    if (!(growth > 1.0)) throw ParameterError("check-schedule growth factor must exceed 1");
    const std::size_t first = resolved_n_star();
    if (first < 8) throw ParameterError("n* must be at least 8");
    if (first > max_n) throw ParameterError("n* exceeds max-n");
    std::size_t prev = first;
    for (std::size_t c : checkpoints) {
        if (c <= prev) throw ParameterError("checkpoints must be strictly increasing past n*");
        prev = c;
    }
    if (batch_size && *batch_size == 0) throw ParameterError("batch size must be >= 1");
}

SigmaChoice estimate_sigma(const ChainMatrix& chain, EstimatorKind kind, std::size_t b) {
    switch (kind) {
        case EstimatorKind::BatchMeans: return {batch_means_sigma(chain, b), false};
        case EstimatorKind::FlatTop: {
            auto flat = flat_top_sigma(chain, b);
            if (flat.positive_definite) return {std::move(flat), false};
            return {batch_means_sigma(chain, b), true};
        }
        case EstimatorKind::SampleCov: return {sample_cov_lambda(chain), false};
    }
    throw ParameterError("unknown estimator kind");
}

StoppingVerdict evaluate_verdict(const ChainMatrix& chain, const StoppingConfig& config) {
    const std::size_t n = chain.rows();
    if (chain.cols() != config.p) throw DimensionError("chain width does not match config p");
    const std::size_t b = config.batch_size_at(n);
    const auto lambda = sample_cov_lambda(chain);
    const auto choice = estimate_sigma(chain, config.sigma_kind, b);
    const double cutoff = config.cutoff().value;

    StoppingVerdict v;
    v.n = n;
    v.ess = ess(n, lambda, choice.sigma);
    v.cutoff = cutoff;
    v.rhat = rhat_from_ess(v.ess);
    v.terminate = v.ess >= cutoff && n >= config.resolved_n_star();
    v.fallback_used = choice.fallback_used;
    v.batch_size = b;
    v.sigma_kind = choice.sigma.kind;
    return v;
}

StoppingResult stopping_controller(const StepFunction& step, const StoppingConfig& config,
                                   RngStream& rng, ChainMatrix chain) {
    config.validate();
    if (chain.cols() != config.p) throw DimensionError("chain width does not match config p");

    std::vector<double> row(config.p);
    StoppingResult result{std::move(chain), {}, false};
    auto& c = result.chain;
    auto grow = [&](std::size_t target) {
        c.reserve(target);
        while (c.rows() < target) {
            step(rng, row);
            c.append_row(row);
        }
    };

    std::size_t next = std::max(config.resolved_n_star(), c.rows());
    std::size_t scheduled = 0;
    for (;;) {
        grow(next);
        const auto verdict = evaluate_verdict(c, config);
        result.history.push_back(verdict);
        if (verdict.terminate) {
            result.terminated = true;
            break;
        }
        if (c.rows() >= config.max_n) break;
        while (scheduled < config.checkpoints.size() && config.checkpoints[scheduled] <= c.rows()) {
            ++scheduled;
        }
        if (scheduled < config.checkpoints.size()) {
            next = config.checkpoints[scheduled++];
        } else {
            next = static_cast<std::size_t>(std::ceil(static_cast<double>(c.rows()) * config.growth));
        }
        next = std::min(next, config.max_n);
    }
    return result;
}

}  // namespace mcout
