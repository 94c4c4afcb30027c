#include "rent/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rent {

namespace {

// Continued fraction for the incomplete beta function (Numerical Recipes
// style, modified Lentz with the usual even/odd coefficient pairs).
double beta_cont_frac(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("reg_incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // Use the symmetry relation where the continued fraction converges fastest.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_frac(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double t_cdf(double x, int df) {
  if (df < 1) throw std::invalid_argument("t_cdf: df must be >= 1");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double nu = static_cast<double>(df);
  const double w = nu / (nu + x * x);
  const double half_tail = 0.5 * reg_incomplete_beta(0.5 * nu, 0.5, w);
  return x > 0.0 ? 1.0 - half_tail : half_tail;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("sample_mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double one_sided_t_test(const std::vector<double>& null_sample, double observed) {
  if (null_sample.size() < 2) throw std::invalid_argument("one_sided_t_test: sample size < 2");
  bool constant = true;
  for (double x : null_sample) constant = constant && x == null_sample.front();
  if (constant) return observed > null_sample.front() ? 0.0 : 1.0;
  const double m = sample_mean(null_sample);
  const double var = sample_variance(null_sample);
  const auto l = static_cast<double>(null_sample.size());
  if (var == 0.0) return observed > m ? 0.0 : 1.0;  // catastrophic cancellation guard
  const double t = (observed - m) / std::sqrt(var / l);
  return 1.0 - t_cdf(t, static_cast<int>(null_sample.size()) - 1);
}

}  // namespace rent
