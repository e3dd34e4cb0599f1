#include "mcout/ar1.hpp"

#include <cmath>
#include <vector>

#include "mcout/errors.hpp"

namespace mcout {

Ar1Spec Ar1Spec::unit_variance(double rho, std::size_t dim) {
    Ar1Spec spec;
    spec.rho = rho;
    spec.innovation_sd = std::sqrt(1.0 - rho * rho);
    spec.dim = dim;
    return spec;
}

ChainMatrix generate_ar1(const Ar1Spec& spec, std::size_t n, RngStream& rng) {
    if (!(std::abs(spec.rho) < 1.0)) throw ParameterError("AR(1) requires |rho| < 1");
    if (!(spec.innovation_sd > 0.0)) throw ParameterError("innovation sd must be positive");
    if (spec.dim == 0) throw ParameterError("AR(1) dimension must be >= 1");
    if (n == 0) throw ParameterError("AR(1) length must be >= 1");

    const auto p = static_cast<Eigen::Index>(spec.dim);
    Eigen::MatrixXd factor = Eigen::MatrixXd::Identity(p, p);
    if (spec.cross_correlation) {
        const auto& corr = *spec.cross_correlation;
        if (corr.rows() != p || corr.cols() != p) {
            throw DimensionError("cross-correlation must be dim x dim");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(corr);
        if (llt.info() != Eigen::Success) {
            throw ParameterError("cross-correlation must be positive definite");
        }
        factor = llt.matrixL();
    }

    const double stationary_sd = spec.innovation_sd / std::sqrt(1.0 - spec.rho * spec.rho);
    Eigen::VectorXd z(p);
    auto draw = [&] {
        for (Eigen::Index i = 0; i < p; ++i) z(i) = rng.normal();
        return Eigen::VectorXd(factor * z);
    };

    ChainMatrix out(spec.dim);
    out.reserve(n);
    Eigen::VectorXd x = stationary_sd * draw();
    out.append_row(std::span<const double>(x.data(), spec.dim));
    for (std::size_t t = 1; t < n; ++t) {
        x = spec.rho * x + spec.innovation_sd * draw();
        out.append_row(std::span<const double>(x.data(), spec.dim));
    }
    return out;
}

}  // namespace mcout
