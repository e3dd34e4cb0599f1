#pragma once

namespace mcout {

// Quantile functions used for stopping cutoffs and confidence regions.
// All throw ParameterError for prob outside (0, 1) or non-positive degrees
// of freedom and NumericsError if the underlying root finder fails.

double chi2_quantile(double prob, double dof);
double f_quantile(double prob, double d1, double d2);
double normal_quantile(double prob);

double chi2_cdf(double x, double dof);
double f_cdf(double x, double d1, double d2);

}  // namespace mcout
