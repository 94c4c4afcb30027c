#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rent/dataset.hpp"
#include "rent/glm.hpp"

namespace rent {

// K x N matrix collecting each feature's weight from each ensemble model.
struct WeightMatrix {
  Eigen::MatrixXd b;

  int k_models() const { return static_cast<int>(b.rows()); }
  int n_features() const { return static_cast<int>(b.cols()); }
};

// Column-wise quality metrics of the weight matrix, all in [0,1].
struct CriteriaScores {
  Eigen::VectorXd tau1;       // selection frequency
  Eigen::VectorXd tau2;       // sign stability
  Eigen::VectorXd tau3;       // t-CDF of the mean-weight statistic
  Eigen::VectorXd mean_mu;
  Eigen::VectorXd var_sigma2;
};

struct Cutoffs {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

// Prediction made on a training object while it sat in some validation set.
struct ValRecord {
  int model_k;
  double prediction;  // ProbC1 for classification, point prediction otherwise
};

struct EnsembleOutput {
  WeightMatrix weight_matrix;
  std::vector<std::vector<ValRecord>> object_records;  // indexed by training object
  std::vector<Subsample> subsample_log;                // the K index partitions
  std::vector<int> nonconverged_models;                // warnings, not failures
};

struct SelectionResult {
  CriteriaScores scores;
  Cutoffs cutoffs;
  std::vector<int> selected;  // F*, sorted ascending
  int delta = 0;              // |F*|
};

struct EnsembleConfig {
  int k_models = 100;
  ElasticNetConfig enet;
  std::pair<double, double> fraction_range = {0.5, 0.5};
  std::uint64_t master_seed = 0;
  int n_threads = 0;   // 0 = hardware concurrency
  int retry_cap = 25;  // redraws allowed per model for single-class subsamples
};

// Trains K elastic-net GLMs on random subsamples of the (standardized)
// training set. Row k of B holds model k's weights; every validation-set
// prediction is recorded per object. Deterministic given master_seed and
// independent of thread count.
EnsembleOutput train_ensemble(const Dataset& train, const EnsembleConfig& cfg);

// Fraction of exactly-nonzero entries.
double tau1(const Eigen::VectorXd& column);

// |sum of signs| / K, sign(0) = 0.
double tau2(const Eigen::VectorXd& column);

// t-CDF (K-1 df) of |mean| / sqrt(var/K) with sample variance. A degenerate
// zero-variance column gives 1 for a nonzero mean and 0.5 otherwise.
double tau3(const Eigen::VectorXd& column);

CriteriaScores score_features(const WeightMatrix& wm);

// F* = features meeting all three cutoffs (>=, boundary included). An empty
// F* is a legal result, surfaced to callers as delta == 0.
SelectionResult select_features(const CriteriaScores& scores, const Cutoffs& cutoffs);

// Column projection onto the selected feature subset.
Dataset apply_selection(const Dataset& data, const std::vector<int>& selected);

void to_json(nlohmann::json& j, const SelectionResult& r);
void to_json(nlohmann::json& j, const EnsembleOutput& e);
void from_json(const nlohmann::json& j, EnsembleOutput& e);

}  // namespace rent
