#pragma once

#include <Eigen/Dense>

namespace rent {

struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long fn_ = 0;
  long tn = 0;
};

// Counts with respect to the declared positive class (0 or 1).
ConfusionMatrix confusion(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                          int positive_class);

// Zero denominators yield 0 by convention.
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);
double f1(const ConfusionMatrix& cm);

// Matthews correlation coefficient in [-1, 1]; 0 when any factor of the
// radicand vanishes.
double mcc(const ConfusionMatrix& cm);

double rmsep(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// 1 - SSE/SST; requires a non-constant y_true.
double r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// Binary indicator matrix of M feature-selection runs over N features.
struct SelectionRuns {
  Eigen::MatrixXi z;  // z(m, n) = 1 iff feature n selected in run m
};

// Nogueira stability: 1 - mean column sample variance over the variance of a
// maximally stable selector with the same average selection size. Returns
// NaN when every run selects nothing or everything (degenerate denominator).
double nogueira_stability(const SelectionRuns& runs);

}  // namespace rent
