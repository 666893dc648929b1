#pragma once

namespace qrsense {

// Regularized lower incomplete gamma P(a, x) (series / continued fraction).
double regularized_gamma_p(double a, double x);

// CDF of a chi-squared variable with `dof` degrees of freedom.
double chi_squared_cdf(double x, int dof);

// Quantile by bisection on the CDF, accurate to about 1e-10.
double chi_squared_quantile(double probability, int dof);

}  // namespace qrsense
