#pragma once

// Reference computations for tests. Everything here is written from first
// principles with plain loops and must not call into the code under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// Univariate batch means with explicit loops: (b / (a - 1)) sum (Ybar_k - mean)^2
// over the first a*b values.
inline double batch_means(const std::vector<double>& x, std::size_t b) {
    const std::size_t a = x.size() / b;
    std::vector<double> means(a, 0.0);
    for (std::size_t k = 0; k < a; ++k) {
        for (std::size_t t = 0; t < b; ++t) means[k] += x[k * b + t];
        means[k] /= static_cast<double>(b);
    }
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= static_cast<double>(a);
    double ss = 0.0;
    for (double m : means) ss += (m - grand) * (m - grand);
    return static_cast<double>(b) * ss / static_cast<double>(a - 1);
}

// Full sort, then scan for the smallest j with n*q <= j (1-based), i.e. the
// ceil(nq)-th order statistic.
inline double sorted_scan_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double nq = static_cast<double>(v.size()) * q;
    for (std::size_t j = 1; j <= v.size(); ++j) {
        if (nq <= static_cast<double>(j)) return v[j - 1];
    }
    return v.back();
}

// Sum of autocovariances of a stationary AR(1) with stationary variance gamma0.
inline double ar1_sigma(double rho, double gamma0) { return gamma0 * (1.0 + rho) / (1.0 - rho); }

inline double sample_acf(const std::vector<double>& x, std::size_t lag) {
    const auto n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double c0 = 0.0;
    double ck = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) c0 += (x[t] - mean) * (x[t] - mean);
    for (std::size_t t = 0; t + lag < x.size(); ++t) ck += (x[t] - mean) * (x[t + lag] - mean);
    return ck / c0;
}

inline double mean(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    return m / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

// Composite Simpson rule on [a, b] with an even number of panels.
template <class Fn>
double simpson(Fn&& f, double a, double b, std::size_t panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) {
        acc += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

}  // namespace oracle
