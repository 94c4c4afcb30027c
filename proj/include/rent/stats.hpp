#pragma once

#include <vector>

namespace rent {

// Regularized incomplete beta function I_x(a, b) for a, b > 0 and x in [0, 1].
// Continued-fraction evaluation (modified Lentz), absolute accuracy ~1e-14.
double reg_incomplete_beta(double a, double b, double x);

// CDF of Student's t-distribution with df >= 1 degrees of freedom.
// Absolute accuracy <= 1e-10 for |x| <= 50.
double t_cdf(double x, int df);

// One-sided t-test of H0 "observed <= mean(null_sample)".
// T = (observed - mean) / sqrt(var/l), p = 1 - t_cdf(T, l-1).
// A constant sample degenerates to p = 0 if observed > the constant, else 1.
double one_sided_t_test(const std::vector<double>& null_sample, double observed);

double sample_mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);  // divisor l-1

}  // namespace rent
