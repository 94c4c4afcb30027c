#pragma once

#include <Eigen/Dense>

#include "json.hpp"
#include "rent/dataset.hpp"

namespace rent {

struct ElasticNetConfig {
  double gamma = 0.1;   // regularization strength, >= 0
  double alpha = 0.5;   // L1 ratio in [0,1]
  double tol = 1e-5;    // max absolute coordinate change per sweep
  int max_iter = 1000;  // CD sweeps (linear) / outer reweightings (logistic)
  int max_inner_iter = 100;  // CD sweeps per reweighting (logistic only)
};

struct GlmModel {
  double intercept = 0.0;
  Eigen::VectorXd weights;
  Task task = Task::Regression;
  bool converged = false;
  int n_iterations = 0;
  bool separable = false;  // logistic fit saturated on perfectly separated data
  ElasticNetConfig config;  // the settings this model was fit with

  int nonzero_count() const {
    int c = 0;
    for (Eigen::Index j = 0; j < weights.size(); ++j)
      if (weights(j) != 0.0) ++c;
    return c;
  }
};

// Minimizes (1/(2I))*sum_i (y_i - b0 - x_i b)^2
//           + gamma*(alpha*|b|_1 + (1-alpha)/2*|b|_2^2)
// by cyclic coordinate descent with soft-thresholding. The intercept is
// unpenalized. Deterministic: starts from zero weights.
GlmModel fit_linear_enet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const ElasticNetConfig& cfg);

// Minimizes (1/I)*sum_i -[y_i log p_i + (1-y_i) log(1-p_i)] + the same
// penalty, p_i = sigmoid(b0 + x_i b). Iteratively reweighted quadratic
// approximation with an inner coordinate-descent solve; quadratic weights
// are clipped below at 1e-6 and each outer step is backtracked if it would
// increase the penalized objective.
GlmModel fit_logistic_enet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const ElasticNetConfig& cfg);

GlmModel fit_glm_enet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Task task,
                      const ElasticNetConfig& cfg);

// Regression: b0 + x b.  Classification: sigmoid(b0 + x b), i.e. ProbC1.
Eigen::VectorXd predict(const GlmModel& model, const Eigen::MatrixXd& x);

// Hard class labels at the given probability threshold.
Eigen::VectorXd predict_labels(const GlmModel& model, const Eigen::MatrixXd& x,
                               double threshold = 0.5);

double sigmoid(double z);

double enet_penalty(const Eigen::VectorXd& weights, double gamma, double alpha);

// Full penalized objective of the corresponding fit; used by convergence
// diagnostics and tests.
double enet_objective(const GlmModel& model, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& y, const ElasticNetConfig& cfg);

// BIC = -2 log L + rho * log I with rho = nonzero weight count + 1 for the
// offset. Regression uses the profile Gaussian likelihood, I*log(SSE/I), with
// model-independent constants dropped; classification uses the Bernoulli
// likelihood with probabilities clipped to [1e-12, 1-1e-12]. A perfect
// regression fit (SSE = 0) returns -infinity so it dominates any comparison.
double bic(const GlmModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

void to_json(nlohmann::json& j, const GlmModel& model);

}  // namespace rent
