#include "mcout/distributions.hpp"

#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include "mcout/errors.hpp"

namespace mcout {

namespace {

void check_prob(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw ParameterError("probability must lie in (0, 1)");
}

void check_dof(double dof) {
    if (!(dof > 0.0)) throw ParameterError("degrees of freedom must be positive");
}

template <class Fn>
double guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw NumericsError(std::string("quantile evaluation failed: ") + e.what());
    }
}

}  // namespace

double chi2_quantile(double prob, double dof) {
    check_prob(prob);
    check_dof(dof);
    return guarded([&] { return quantile(boost::math::chi_squared(dof), prob); });
}

double f_quantile(double prob, double d1, double d2) {
    check_prob(prob);
    check_dof(d1);
    check_dof(d2);
    return guarded([&] { return quantile(boost::math::fisher_f(d1, d2), prob); });
}

double normal_quantile(double prob) {
    check_prob(prob);
    return guarded([&] { return quantile(boost::math::normal(), prob); });
}

double chi2_cdf(double x, double dof) {
    check_dof(dof);
    if (x <= 0.0) return 0.0;
    return guarded([&] { return cdf(boost::math::chi_squared(dof), x); });
}

double f_cdf(double x, double d1, double d2) {
    check_dof(d1);
    check_dof(d2);
    if (x <= 0.0) return 0.0;
    return guarded([&] { return cdf(boost::math::fisher_f(d1, d2), x); });
}

}  // namespace mcout
