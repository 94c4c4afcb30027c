#include "rent/glm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rent {

namespace {

constexpr double kMinIrlsWeight = 1e-6;
constexpr double kProbClip = 1e-12;

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const ElasticNetConfig& cfg) {
  if (x.rows() != y.size()) throw std::invalid_argument("fit: row count of x must equal length of y");
  if (x.rows() < 2) throw std::invalid_argument("fit: need at least 2 objects");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("fit: non-finite input");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("fit: tol must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("fit: max_iter must be >= 1");
  if (cfg.gamma < 0.0) throw std::invalid_argument("fit: gamma must be >= 0");
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0) throw std::invalid_argument("fit: alpha must lie in [0,1]");
}

// One cyclic sweep of penalized weighted least squares updates. `r` holds the
// working residual z - b0 - x*beta and is kept in sync. Returns the largest
// absolute parameter change. With `w` empty the unweighted updates are used.
double cd_sweep(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, double w_sum,
                const Eigen::VectorXd& sq, const std::vector<int>& work, double l1,
                double l2, Eigen::VectorXd& r, Eigen::VectorXd& beta, double& b0) {
  const auto n_rows = static_cast<double>(x.rows());
  const bool weighted = w.size() > 0;
  double max_change = 0.0;
  for (int j : work) {
    const double denom = sq(j) + l2;
    if (denom == 0.0) continue;  // all-zero column with no ridge term
    double dot;
    if (weighted)
      dot = (w.array() * x.col(j).array() * r.array()).sum() / n_rows;
    else
      dot = x.col(j).dot(r) / n_rows;
    const double z = dot + sq(j) * beta(j);
    const double updated = soft_threshold(z, l1) / denom;
    const double change = updated - beta(j);
    if (change != 0.0) {
      r -= x.col(j) * change;
      beta(j) = updated;
      max_change = std::max(max_change, std::fabs(change));
    }
  }
  // Unpenalized intercept.
  double d;
  if (weighted)
    d = w.dot(r) / w_sum;
  else
    d = r.mean();
  if (d != 0.0) {
    b0 += d;
    r.array() -= d;
    max_change = std::max(max_change, std::fabs(d));
  }
  return max_change;
}

std::vector<int> all_columns(Eigen::Index n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = static_cast<int>(j);
  return v;
}

std::vector<int> active_columns(const Eigen::VectorXd& beta) {
  std::vector<int> v;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) v.push_back(static_cast<int>(j));
  return v;
}

// Numerically stable log(1 + exp(-s)).
double softplus_neg(double s) {
  if (s > 0.0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double b0,
                     const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = (x * beta).array() + b0;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double s = (2.0 * y(i) - 1.0) * eta(i);
    loss += softplus_neg(s);
  }
  return loss / static_cast<double>(y.size());
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double enet_penalty(const Eigen::VectorXd& weights, double gamma, double alpha) {
  return gamma * (alpha * weights.lpNorm<1>() +
                  0.5 * (1.0 - alpha) * weights.squaredNorm());
}

GlmModel fit_linear_enet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const ElasticNetConfig& cfg) {
  check_inputs(x, y, cfg);
  const auto n_rows = static_cast<double>(x.rows());
  const Eigen::Index n_feat = x.cols();
  const double l1 = cfg.gamma * cfg.alpha;
  const double l2 = cfg.gamma * (1.0 - cfg.alpha);

  Eigen::VectorXd sq(n_feat);
  for (Eigen::Index j = 0; j < n_feat; ++j) sq(j) = x.col(j).squaredNorm() / n_rows;

  GlmModel m;
  m.task = Task::Regression;
  m.config = cfg;
  m.weights = Eigen::VectorXd::Zero(n_feat);
  m.intercept = y.mean();
  Eigen::VectorXd r = y.array() - m.intercept;
  const Eigen::VectorXd no_weights;

  // glmnet-style active-set iteration: converge on the nonzero set, then
  // verify with a full sweep.
  const std::vector<int> full = all_columns(n_feat);
  bool on_full = true;
  int sweeps = 0;
  while (sweeps < cfg.max_iter) {
    const std::vector<int> work = on_full ? full : active_columns(m.weights);
    const double change =
        cd_sweep(x, no_weights, n_rows, sq, work, l1, l2, r, m.weights, m.intercept);
    ++sweeps;
    if (change < cfg.tol) {
      if (on_full) {
        m.converged = true;
        break;
      }
      on_full = true;  // re-check every coordinate before declaring convergence
    } else {
      on_full = false;
    }
  }
  m.n_iterations = sweeps;
  return m;
}

GlmModel fit_logistic_enet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const ElasticNetConfig& cfg) {
  check_inputs(x, y, cfg);
  const auto n_rows = static_cast<double>(x.rows());
  const Eigen::Index n_feat = x.cols();
  double y_mean = y.mean();
  if (y_mean == 0.0 || y_mean == 1.0)
    throw std::invalid_argument("fit_logistic_enet: both classes must be present");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) != 0.0 && y(i) != 1.0)
      throw std::invalid_argument("fit_logistic_enet: labels must be 0 or 1");

  const double l1 = cfg.gamma * cfg.alpha;
  const double l2 = cfg.gamma * (1.0 - cfg.alpha);

  GlmModel m;
  m.task = Task::Classification;
  m.config = cfg;
  m.weights = Eigen::VectorXd::Zero(n_feat);
  m.intercept = std::log(y_mean / (1.0 - y_mean));

  const std::vector<int> full = all_columns(n_feat);
  double objective = logistic_loss(x, y, m.intercept, m.weights) +
                     enet_penalty(m.weights, cfg.gamma, cfg.alpha);

  Eigen::VectorXd eta(y.size()), p(y.size()), w(y.size()), z(y.size()), sq(n_feat), r(y.size());
  int outer = 0;
  for (; outer < cfg.max_iter; ++outer) {
    eta = (x * m.weights).array() + m.intercept;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      p(i) = sigmoid(eta(i));
      w(i) = std::max(p(i) * (1.0 - p(i)), kMinIrlsWeight);
      z(i) = eta(i) + (y(i) - p(i)) / w(i);
    }
    const double w_sum = w.sum();
    for (Eigen::Index j = 0; j < n_feat; ++j)
      sq(j) = (w.array() * x.col(j).array().square()).sum() / n_rows;

    const double prev_b0 = m.intercept;
    const Eigen::VectorXd prev_beta = m.weights;

    r = z - eta;  // working residual, since eta = b0 + x*beta
    bool on_full = true;
    for (int inner = 0; inner < cfg.max_inner_iter; ++inner) {
      const std::vector<int> work = on_full ? full : active_columns(m.weights);
      const double change = cd_sweep(x, w, w_sum, sq, work, l1, l2, r, m.weights, m.intercept);
      if (change < cfg.tol) {
        if (on_full) break;
        on_full = true;
      } else {
        on_full = false;
      }
    }

    // The quadratic approximation can overshoot; halve the step until the
    // true penalized objective stops increasing.
    double new_objective = logistic_loss(x, y, m.intercept, m.weights) +
                           enet_penalty(m.weights, cfg.gamma, cfg.alpha);
    int halvings = 0;
    while (new_objective > objective + 1e-12 && halvings < 30) {
      m.intercept = 0.5 * (m.intercept + prev_b0);
      m.weights = 0.5 * (m.weights + prev_beta);
      new_objective = logistic_loss(x, y, m.intercept, m.weights) +
                      enet_penalty(m.weights, cfg.gamma, cfg.alpha);
      ++halvings;
    }
    if (new_objective > objective) {  // no descent possible from here
      m.intercept = prev_b0;
      m.weights = prev_beta;
      m.converged = true;
      ++outer;
      break;
    }
    objective = new_objective;

    double outer_change = std::fabs(m.intercept - prev_b0);
    for (Eigen::Index j = 0; j < n_feat; ++j)
      outer_change = std::max(outer_change, std::fabs(m.weights(j) - prev_beta(j)));
    if (outer_change < cfg.tol) {
      m.converged = true;
      ++outer;
      break;
    }
  }
  m.n_iterations = outer;

  // Perfect separation: every object on the correct side with saturated
  // probabilities. The capped fit is still usable; flag it.
  eta = (x * m.weights).array() + m.intercept;
  bool all_correct = true;
  for (Eigen::Index i = 0; i < y.size() && all_correct; ++i)
    all_correct = (2.0 * y(i) - 1.0) * eta(i) > 0.0;
  m.separable = all_correct && logistic_loss(x, y, m.intercept, m.weights) < 1e-4;
  return m;
}

GlmModel fit_glm_enet(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Task task,
                      const ElasticNetConfig& cfg) {
  return task == Task::Classification ? fit_logistic_enet(x, y, cfg)
                                      : fit_linear_enet(x, y, cfg);
}

Eigen::VectorXd predict(const GlmModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.weights.size())
    throw std::invalid_argument("predict: column count does not match model weights");
  Eigen::VectorXd eta = (x * model.weights).array() + model.intercept;
  if (model.task == Task::Regression) return eta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = sigmoid(eta(i));
  return eta;
}

Eigen::VectorXd predict_labels(const GlmModel& model, const Eigen::MatrixXd& x,
                               double threshold) {
  if (model.task != Task::Classification)
    throw std::invalid_argument("predict_labels: model is not a classifier");
  Eigen::VectorXd probs = predict(model, x);
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    probs(i) = probs(i) >= threshold ? 1.0 : 0.0;
  return probs;
}

double enet_objective(const GlmModel& model, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& y, const ElasticNetConfig& cfg) {
  const auto n_rows = static_cast<double>(x.rows());
  const double penalty = enet_penalty(model.weights, cfg.gamma, cfg.alpha);
  if (model.task == Task::Regression) {
    const Eigen::VectorXd r = y - ((x * model.weights).array() + model.intercept).matrix();
    return r.squaredNorm() / (2.0 * n_rows) + penalty;
  }
  return logistic_loss(x, y, model.intercept, model.weights) + penalty;
}

double bic(const GlmModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw std::invalid_argument("bic: row count of x must equal length of y");
  const auto n_rows = static_cast<double>(x.rows());
  if (n_rows < 1.0) throw std::invalid_argument("bic: empty data");
  const double rho = static_cast<double>(model.nonzero_count()) + 1.0;

  if (model.task == Task::Regression) {
    const Eigen::VectorXd r = y - predict(model, x);
    const double sse = r.squaredNorm();
    if (sse == 0.0) return -std::numeric_limits<double>::infinity();
    return n_rows * std::log(sse / n_rows) + rho * std::log(n_rows);
  }

  const Eigen::VectorXd probs = predict(model, x);
  double log_lik = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double p = std::min(std::max(probs(i), kProbClip), 1.0 - kProbClip);
    log_lik += y(i) * std::log(p) + (1.0 - y(i)) * std::log(1.0 - p);
  }
  return -2.0 * log_lik + rho * std::log(n_rows);
}

void to_json(nlohmann::json& j, const GlmModel& model) {
  j = nlohmann::json{
      {"intercept", model.intercept},
      {"weights", std::vector<double>(model.weights.begin(), model.weights.end())},
      {"task", task_name(model.task)},
      {"converged", model.converged},
      {"n_iterations", model.n_iterations},
      {"separable", model.separable},
      {"config",
       {{"gamma", model.config.gamma},
        {"alpha", model.config.alpha},
        {"tol", model.config.tol},
        {"max_iter", model.config.max_iter}}},
  };
}

}  // namespace rent
