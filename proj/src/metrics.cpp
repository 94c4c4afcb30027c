#include "rent/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rent {

ConfusionMatrix confusion(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                          int positive_class) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("confusion: length mismatch");
  if (y_true.size() < 1) throw std::invalid_argument("confusion: empty input");
  if (positive_class != 0 && positive_class != 1)
    throw std::invalid_argument("confusion: positive_class must be 0 or 1");
  const double pos = static_cast<double>(positive_class);
  ConfusionMatrix cm;
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    const double t = y_true(i);
    const double p = y_pred(i);
    if ((t != 0.0 && t != 1.0) || (p != 0.0 && p != 1.0))
      throw std::invalid_argument("confusion: labels must be 0 or 1");
    if (t == pos)
      (p == pos ? cm.tp : cm.fn_)++;
    else
      (p == pos ? cm.fp : cm.tn)++;
  }
  return cm;
}

double precision(const ConfusionMatrix& cm) {
  const double denom = static_cast<double>(cm.tp + cm.fp);
  return denom == 0.0 ? 0.0 : static_cast<double>(cm.tp) / denom;
}

double recall(const ConfusionMatrix& cm) {
  const double denom = static_cast<double>(cm.tp + cm.fn_);
  return denom == 0.0 ? 0.0 : static_cast<double>(cm.tp) / denom;
}

double f1(const ConfusionMatrix& cm) {
  const double pr = precision(cm);
  const double rc = recall(cm);
  return (pr + rc) == 0.0 ? 0.0 : 2.0 * pr * rc / (pr + rc);
}

double mcc(const ConfusionMatrix& cm) {
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn_);
  const double tn = static_cast<double>(cm.tn);
  const double radicand = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (radicand == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(radicand);
}

double rmsep(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("rmsep: length mismatch");
  if (y_true.size() < 1) throw std::invalid_argument("rmsep: empty input");
  return std::sqrt((y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size()));
}

double r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("r2: length mismatch");
  if (y_true.size() < 2) throw std::invalid_argument("r2: need at least 2 values");
  const double mean = y_true.mean();
  const double sst = (y_true.array() - mean).square().sum();
  if (sst == 0.0) throw std::invalid_argument("r2: constant y_true");
  const double sse = (y_true - y_pred).squaredNorm();
  return 1.0 - sse / sst;
}

double nogueira_stability(const SelectionRuns& runs) {
  const Eigen::Index m = runs.z.rows();
  const Eigen::Index n = runs.z.cols();
  if (m < 2) throw std::invalid_argument("nogueira_stability: need at least 2 runs");

  // For binary indicators the unbiased column variance reduces to
  // c_j(M - c_j) / (M(M-1)) with c_j the column count, so the whole ratio is
  // a quotient of integers: phi = 1 - S*M*N / ((M-1) * T * (MN - T)) with
  // S = sum_j c_j(M - c_j) and T the total count.
  double s = 0.0;
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double count = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const int z = runs.z(i, j);
      if (z != 0 && z != 1) throw std::invalid_argument("nogueira_stability: z must be binary");
      count += z;
    }
    s += count * (static_cast<double>(m) - count);
    total += count;
  }

  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double denom = (md - 1.0) * total * (md * nd - total);
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 - s * md * nd / denom;
}

}  // namespace rent
