#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mcout {

/// ceil(nq)-th order statistic: V_(j+1) with j < nq <= j+1. No interpolation.
/// Throws DataError on an empty series and ParameterError for q outside (0, 1).
double empirical_quantile(std::span<const double> v, double q);

/// Batch-means estimate of sum_k Cov(I(V_1 <= y), I(V_{1+k} <= y)).
/// Throws DegenerateDataError when every indicator takes the same value.
double indicator_sigma2(std::span<const double> v, double y, std::size_t b);

/// Gaussian kernel density estimate with Silverman's rule-of-thumb bandwidth
/// 0.9 * min(sd, IQR / 1.34) * n^(-1/5). When the IQR is zero the sd alone
/// is used.
class KernelDensity {
public:
    explicit KernelDensity(std::span<const double> v);

    double bandwidth() const noexcept { return bandwidth_; }
    double operator()(double x) const;

private:
    std::vector<double> sorted_;
    double bandwidth_ = 0.0;
};

double kde_at(std::span<const double> v, double x);

struct QuantileEstimate {
    double q = 0.5;
    double point = 0.0;
    double indicator_sigma2 = 0.0;
    double density = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double alpha = 0.05;       // level actually used for this interval
    std::size_t batch_size = 0;
    bool bonferroni = false;   // alpha was divided across a family
};

/// point +/- z_{1-alpha/2} sqrt(sigma2(point)) / (f(point) sqrt(n)).
/// b defaults to default_batch_size(n).
QuantileEstimate quantile_ci(std::span<const double> v, double q, double alpha,
                             std::optional<std::size_t> b = std::nullopt);

/// Simultaneous intervals for several quantiles of one series by Bonferroni
/// adjustment (each interval at level alpha / qs.size()).
std::vector<QuantileEstimate> bonferroni_quantile_cis(std::span<const double> v,
                                                      std::span<const double> qs, double alpha,
                                                      std::optional<std::size_t> b = std::nullopt);

}  // namespace mcout
