#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "mcout/chain.hpp"
#include "mcout/rng.hpp"

namespace mcout {

/// Vector AR(1) reference process X_{t+1} = rho X_t + e_t with
/// e_t ~ N(0, innovation_sd^2 R), where R is the optional innovation
/// correlation (identity when absent). Used as a test oracle: lag-k
/// covariance is rho^|k| * innovation_sd^2 R / (1 - rho^2), so the
/// asymptotic covariance is that matrix times (1 + rho) / (1 - rho).
struct Ar1Spec {
    double rho = 0.0;
    double innovation_sd = 1.0;
    std::size_t dim = 1;
    std::optional<Eigen::MatrixXd> cross_correlation;

    double stationary_variance() const {
        return innovation_sd * innovation_sd / (1.0 - rho * rho);
    }
    /// Sum over all lags of the autocovariance of one component.
    double asymptotic_variance() const { return stationary_variance() * (1.0 + rho) / (1.0 - rho); }

    /// Spec whose components have unit stationary variance.
    static Ar1Spec unit_variance(double rho, std::size_t dim = 1);
};

/// Draws n rows; X_1 comes from the stationary law so every lag covariance
/// holds exactly from the first row. Throws ParameterError when |rho| >= 1,
/// innovation_sd <= 0, or the correlation matrix is not positive definite.
ChainMatrix generate_ar1(const Ar1Spec& spec, std::size_t n, RngStream& rng);

}  // namespace mcout
