// Independent reference implementations used only by tests. Each oracle takes
// a different computational route than the library code it checks: the t-CDF
// integrates the density numerically, OLS solves the normal equations, the
// logistic reference iterates full Newton steps, and the tau oracle re-derives
// every statistic with naive loops.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double t_density(double x, int df) {
  const double nu = static_cast<double>(df);
  return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                  0.5 * std::log(nu * M_PI) -
                  0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double eps,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 60);
}

// Student's t CDF by quadrature of the density. The upper tail beyond 2 is
// integrated in the substituted variable v = 1/t so arbitrarily large
// statistics stay cheap and accurate.
inline double t_cdf_quadrature(double x, int df) {
  if (df < 1) throw std::invalid_argument("t_cdf_quadrature: df < 1");
  if (x == 0.0) return 0.5;
  const double ax = std::fabs(x);
  double tail;  // P(T > ax)
  if (ax <= 2.0) {
    tail = 0.5 - integrate([df](double t) { return t_density(t, df); }, 0.0, ax, 1e-14);
  } else {
    auto g = [df](double v) {
      if (v == 0.0) return df == 1 ? 1.0 / M_PI : 0.0;
      const double t = 1.0 / v;
      return t_density(t, df) * t * t;
    };
    tail = integrate(g, 0.0, 1.0 / ax, 1e-14);
  }
  return x > 0.0 ? 1.0 - tail : tail;
}

// [intercept, coefficients] by explicitly forming and solving the normal
// equations of the intercept-augmented design.
inline Eigen::VectorXd ols_normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd design(n, x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;
  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::VectorXd rhs = design.transpose() * y;
  return gram.fullPivLu().solve(rhs);
}

// [intercept, coefficients] of unregularized logistic regression by damped
// Newton-Raphson with exact Hessian solves.
inline Eigen::VectorXd newton_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                       int max_iter = 200, double tol = 1e-12) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd design(n, x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(design.cols());
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd eta = design * b;
    Eigen::VectorXd p(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p(i) = 1.0 / (1.0 + std::exp(-eta(i)));
      w(i) = p(i) * (1.0 - p(i));
    }
    const Eigen::VectorXd grad = design.transpose() * (y - p);
    const Eigen::MatrixXd hess =
        design.transpose() * w.asDiagonal() * design;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    b += step;
    if (step.lpNorm<Eigen::Infinity>() < tol) break;
  }
  return b;
}

struct BruteTaus {
  std::vector<double> tau1, tau2, tau3, mean, variance;
};

// Naive per-definition recomputation of the three feature quality metrics.
inline BruteTaus brute_force_taus(const Eigen::MatrixXd& b) {
  const Eigen::Index k = b.rows();
  const Eigen::Index n = b.cols();
  BruteTaus out;
  for (Eigen::Index j = 0; j < n; ++j) {
    int nonzero = 0;
    double sign_sum = 0.0;
    double mu = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = b(i, j);
      if (v != 0.0) ++nonzero;
      if (v > 0.0) sign_sum += 1.0;
      if (v < 0.0) sign_sum -= 1.0;
      mu += v;
    }
    mu /= static_cast<double>(k);
    double var = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) var += (b(i, j) - mu) * (b(i, j) - mu);
    var /= static_cast<double>(k - 1);

    out.tau1.push_back(static_cast<double>(nonzero) / static_cast<double>(k));
    out.tau2.push_back(std::fabs(sign_sum) / static_cast<double>(k));
    if (var == 0.0)
      out.tau3.push_back(mu != 0.0 ? 1.0 : 0.5);
    else
      out.tau3.push_back(
          t_cdf_quadrature(std::fabs(mu) / std::sqrt(var / static_cast<double>(k)),
                           static_cast<int>(k) - 1));
    out.mean.push_back(mu);
    out.variance.push_back(var);
  }
  return out;
}

}  // namespace oracle
