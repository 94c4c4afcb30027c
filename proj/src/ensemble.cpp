#include "rent/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rent/parallel.hpp"
#include "rent/rng.hpp"
#include "rent/stats.hpp"

namespace rent {

namespace {

bool has_both_classes(const Eigen::VectorXd& y, const std::vector<int>& idx) {
  bool saw0 = false, saw1 = false;
  for (int i : idx) {
    (y(i) == 0.0 ? saw0 : saw1) = true;
    if (saw0 && saw1) return true;
  }
  return false;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
  return out;
}

Eigen::VectorXd take_elems(const Eigen::VectorXd& y, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(idx[i]);
  return out;
}

}  // namespace

EnsembleOutput train_ensemble(const Dataset& train, const EnsembleConfig& cfg) {
  if (cfg.k_models < 2) throw std::invalid_argument("train_ensemble: need K >= 2 models");
  const int n_train = train.n_objects();
  const int n_feat = train.n_features();

  EnsembleOutput out;
  out.weight_matrix.b.resize(cfg.k_models, n_feat);
  out.subsample_log.resize(static_cast<std::size_t>(cfg.k_models));
  out.object_records.assign(static_cast<std::size_t>(n_train), {});

  // Per-model validation predictions, merged in model order afterwards so the
  // result is independent of scheduling.
  std::vector<std::vector<double>> val_predictions(static_cast<std::size_t>(cfg.k_models));
  std::vector<char> converged(static_cast<std::size_t>(cfg.k_models), 1);

  parallel_for(cfg.k_models, cfg.n_threads, [&](int k) {
    Subsample sub;
    std::uint64_t seed = derive_seed(cfg.master_seed, seed_stream::kSubsample,
                                     static_cast<std::uint64_t>(k));
    int attempts = 0;
    for (;;) {
      sub = draw_subsample(n_train, cfg.fraction_range, seed);
      if (train.task != Task::Classification || has_both_classes(train.y, sub.train_k)) break;
      if (++attempts > cfg.retry_cap)
        throw std::runtime_error("train_ensemble: single-class subsample after " +
                                 std::to_string(cfg.retry_cap) + " retries for model " +
                                 std::to_string(k));
      // Redraw with a fresh derived seed; the retry counter keys the stream.
      seed = derive_seed(seed, seed_stream::kSubsample,
                         static_cast<std::uint64_t>(cfg.k_models + attempts));
    }

    const Eigen::MatrixXd x_sub = take_rows(train.x, sub.train_k);
    const Eigen::VectorXd y_sub = take_elems(train.y, sub.train_k);
    const GlmModel model = fit_glm_enet(x_sub, y_sub, train.task, cfg.enet);
    out.weight_matrix.b.row(k) = model.weights.transpose();
    converged[static_cast<std::size_t>(k)] = model.converged ? 1 : 0;

    const Eigen::MatrixXd x_val = take_rows(train.x, sub.val_k);
    const Eigen::VectorXd preds = predict(model, x_val);
    val_predictions[static_cast<std::size_t>(k)].assign(preds.begin(), preds.end());
    out.subsample_log[static_cast<std::size_t>(k)] = std::move(sub);
  });

  for (int k = 0; k < cfg.k_models; ++k) {
    const auto& sub = out.subsample_log[static_cast<std::size_t>(k)];
    const auto& preds = val_predictions[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < sub.val_k.size(); ++i)
      out.object_records[static_cast<std::size_t>(sub.val_k[i])].push_back(
          ValRecord{k, preds[i]});
    if (!converged[static_cast<std::size_t>(k)]) out.nonconverged_models.push_back(k);
  }
  return out;
}

double tau1(const Eigen::VectorXd& column) {
  if (column.size() < 1) throw std::invalid_argument("tau1: empty column");
  int nonzero = 0;
  for (Eigen::Index k = 0; k < column.size(); ++k)
    if (column(k) != 0.0) ++nonzero;
  return static_cast<double>(nonzero) / static_cast<double>(column.size());
}

double tau2(const Eigen::VectorXd& column) {
  if (column.size() < 1) throw std::invalid_argument("tau2: empty column");
  double sign_sum = 0.0;
  for (Eigen::Index k = 0; k < column.size(); ++k) {
    if (column(k) > 0.0) sign_sum += 1.0;
    else if (column(k) < 0.0) sign_sum -= 1.0;
  }
  return std::fabs(sign_sum) / static_cast<double>(column.size());
}

double tau3(const Eigen::VectorXd& column) {
  const Eigen::Index k = column.size();
  if (k < 2) throw std::invalid_argument("tau3: need K >= 2");
  const double mu = column.mean();
  const double var = (column.array() - mu).square().sum() / static_cast<double>(k - 1);
  if (var == 0.0) return mu != 0.0 ? 1.0 : 0.5;
  const double t = std::fabs(mu) / std::sqrt(var / static_cast<double>(k));
  return t_cdf(t, static_cast<int>(k) - 1);
}

CriteriaScores score_features(const WeightMatrix& wm) {
  if (wm.k_models() < 2) throw std::invalid_argument("score_features: need K >= 2");
  if (!wm.b.allFinite()) throw std::invalid_argument("score_features: non-finite weights");
  const int n = wm.n_features();
  CriteriaScores s;
  s.tau1.resize(n);
  s.tau2.resize(n);
  s.tau3.resize(n);
  s.mean_mu.resize(n);
  s.var_sigma2.resize(n);
  const double k = static_cast<double>(wm.k_models());
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd col = wm.b.col(j);
    s.tau1(j) = tau1(col);
    s.tau2(j) = tau2(col);
    s.tau3(j) = tau3(col);
    s.mean_mu(j) = col.mean();
    s.var_sigma2(j) = (col.array() - s.mean_mu(j)).square().sum() / (k - 1.0);
  }
  return s;
}

SelectionResult select_features(const CriteriaScores& scores, const Cutoffs& cutoffs) {
  for (double t : {cutoffs.t1, cutoffs.t2, cutoffs.t3})
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("select_features: cutoffs must lie in [0,1]");
  SelectionResult r;
  r.scores = scores;
  r.cutoffs = cutoffs;
  for (Eigen::Index j = 0; j < scores.tau1.size(); ++j) {
    if (scores.tau1(j) >= cutoffs.t1 && scores.tau2(j) >= cutoffs.t2 &&
        scores.tau3(j) >= cutoffs.t3)
      r.selected.push_back(static_cast<int>(j));
  }
  r.delta = static_cast<int>(r.selected.size());
  return r;
}

Dataset apply_selection(const Dataset& data, const std::vector<int>& selected) {
  if (selected.empty()) throw std::invalid_argument("apply_selection: no features selected");
  for (int j : selected)
    if (j < 0 || j >= data.n_features())
      throw std::invalid_argument("apply_selection: feature index " + std::to_string(j) +
                                  " out of range");
  Dataset out;
  out.task = data.task;
  out.y = data.y;
  out.x.resize(data.x.rows(), static_cast<Eigen::Index>(selected.size()));
  for (std::size_t c = 0; c < selected.size(); ++c) {
    out.x.col(static_cast<Eigen::Index>(c)) = data.x.col(selected[c]);
    out.feature_names.push_back(data.feature_names[static_cast<std::size_t>(selected[c])]);
  }
  return out;
}

void to_json(nlohmann::json& j, const SelectionResult& r) {
  j = nlohmann::json{
      {"selected", r.selected},
      {"delta", r.delta},
      {"cutoffs", {{"t1", r.cutoffs.t1}, {"t2", r.cutoffs.t2}, {"t3", r.cutoffs.t3}}},
      {"tau1", std::vector<double>(r.scores.tau1.begin(), r.scores.tau1.end())},
      {"tau2", std::vector<double>(r.scores.tau2.begin(), r.scores.tau2.end())},
      {"tau3", std::vector<double>(r.scores.tau3.begin(), r.scores.tau3.end())},
      {"mean", std::vector<double>(r.scores.mean_mu.begin(), r.scores.mean_mu.end())},
      {"variance", std::vector<double>(r.scores.var_sigma2.begin(), r.scores.var_sigma2.end())},
  };
}

void to_json(nlohmann::json& j, const EnsembleOutput& e) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& recs : e.object_records) {
    nlohmann::json obj = nlohmann::json::array();
    for (const auto& rec : recs) obj.push_back({rec.model_k, rec.prediction});
    records.push_back(std::move(obj));
  }
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : e.subsample_log)
    subs.push_back({{"train_k", s.train_k}, {"val_k", s.val_k}});
  std::vector<std::vector<double>> b(static_cast<std::size_t>(e.weight_matrix.k_models()));
  for (int k = 0; k < e.weight_matrix.k_models(); ++k)
    b[static_cast<std::size_t>(k)] = std::vector<double>(e.weight_matrix.b.row(k).begin(),
                                                         e.weight_matrix.b.row(k).end());
  j = nlohmann::json{
      {"weight_matrix", b},
      {"object_records", std::move(records)},
      {"subsamples", std::move(subs)},
      {"nonconverged_models", e.nonconverged_models},
  };
}

void from_json(const nlohmann::json& j, EnsembleOutput& e) {
  const auto& b = j.at("weight_matrix");
  const auto rows = static_cast<Eigen::Index>(b.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(b.at(0).size()) : 0;
  e.weight_matrix.b.resize(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index n = 0; n < cols; ++n)
      e.weight_matrix.b(k, n) = b.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(n)).get<double>();
  e.object_records.clear();
  for (const auto& obj : j.at("object_records")) {
    std::vector<ValRecord> recs;
    for (const auto& rec : obj)
      recs.push_back(ValRecord{rec.at(0).get<int>(), rec.at(1).get<double>()});
    e.object_records.push_back(std::move(recs));
  }
  e.subsample_log.clear();
  for (const auto& s : j.at("subsamples")) {
    Subsample sub;
    sub.train_k = s.at("train_k").get<std::vector<int>>();
    sub.val_k = s.at("val_k").get<std::vector<int>>();
    e.subsample_log.push_back(std::move(sub));
  }
  e.nonconverged_models = j.value("nonconverged_models", std::vector<int>{});
}

}  // namespace rent
