#include "mcout/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcout/chain.hpp"
#include "mcout/distributions.hpp"
#include "mcout/errors.hpp"
#include "mcout/mcse.hpp"

namespace mcout {

namespace {

void check_q(double q) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile level must lie in (0, 1)");
}

std::size_t order_index(std::size_t n, double q) {
    const double nq = static_cast<double>(n) * q;
    auto j = static_cast<std::size_t>(std::ceil(nq));
    if (j == 0) j = 1;
    if (j > n) j = n;
    return j - 1;
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
    return sorted[order_index(sorted.size(), q)];
}

}  // namespace

double empirical_quantile(std::span<const double> v, double q) {
    check_q(q);
    if (v.empty()) throw DataError("quantile of an empty series");
    std::vector<double> copy(v.begin(), v.end());
    const auto idx = order_index(copy.size(), q);
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(idx), copy.end());
    return copy[idx];
}

double indicator_sigma2(std::span<const double> v, double y, std::size_t b) {
    std::vector<double> ind(v.size());
    std::size_t below = 0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        ind[t] = v[t] <= y ? 1.0 : 0.0;
        below += v[t] <= y ? 1 : 0;
    }
    if (below == 0 || below == v.size()) {
        throw DegenerateDataError("indicator series is constant at the threshold");
    }
    const std::size_t n = ind.size();
    const ChainMatrix chain(n, 1, std::move(ind));
    return batch_means_sigma(chain, b).matrix(0, 0);
}

KernelDensity::KernelDensity(std::span<const double> v) : sorted_(v.begin(), v.end()) {
    const std::size_t n = sorted_.size();
    if (n < 2) throw InsufficientDataError("density estimate needs n >= 2");
    std::sort(sorted_.begin(), sorted_.end());
    if (sorted_.front() == sorted_.back()) {
        throw DegenerateDataError("density estimate of a constant series");
    }
    double mean = 0.0;
    for (double x : sorted_) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : sorted_) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double iqr = sorted_quantile(sorted_, 0.75) - sorted_quantile(sorted_, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    bandwidth_ = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

double KernelDensity::operator()(double x) const {
    // Kernel mass beyond 10 bandwidths is below 1e-22 of the peak.
    const double reach = 10.0 * bandwidth_;
    const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x - reach);
    const auto hi = std::upper_bound(lo, sorted_.end(), x + reach);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
        const double z = (x - *it) / bandwidth_;
        acc += std::exp(-0.5 * z * z);
    }
    return acc * std::numbers::inv_sqrtpi / std::numbers::sqrt2 /
           (static_cast<double>(sorted_.size()) * bandwidth_);
}

double kde_at(std::span<const double> v, double x) { return KernelDensity(v)(x); }

QuantileEstimate quantile_ci(std::span<const double> v, double q, double alpha,
                             std::optional<std::size_t> b) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    const std::size_t n = v.size();
    QuantileEstimate est;
    est.q = q;
    est.alpha = alpha;
    est.point = empirical_quantile(v, q);
    est.batch_size = b.value_or(default_batch_size(n));
    est.indicator_sigma2 = indicator_sigma2(v, est.point, est.batch_size);
    est.density = kde_at(v, est.point);
    if (!(est.density > 0.0)) throw DegenerateDataError("density estimate is zero at the quantile");
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double half =
        z * std::sqrt(est.indicator_sigma2) / (est.density * std::sqrt(static_cast<double>(n)));
    est.lo = est.point - half;
    est.hi = est.point + half;
    return est;
}

std::vector<QuantileEstimate> bonferroni_quantile_cis(std::span<const double> v,
                                                      std::span<const double> qs, double alpha,
                                                      std::optional<std::size_t> b) {
    std::vector<QuantileEstimate> out;
    if (qs.empty()) return out;
    const double adjusted = alpha / static_cast<double>(qs.size());
    out.reserve(qs.size());
    for (double q : qs) {
        auto est = quantile_ci(v, q, adjusted, b);
        est.bonferroni = qs.size() > 1;
        out.push_back(est);
    }
    return out;
}

}  // namespace mcout
