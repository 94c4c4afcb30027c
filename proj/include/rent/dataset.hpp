#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rent {

enum class Task { Classification, Regression };

const char* task_name(Task task);
Task task_from_name(const std::string& name);

// Object-by-feature matrix with target vector. Immutable by convention once
// built; every operation below returns a new Dataset.
struct Dataset {
  Eigen::MatrixXd x;                       // I objects x N features
  Eigen::VectorXd y;                       // class labels {0,1} or real targets
  std::vector<std::string> feature_names;  // size N
  Task task = Task::Classification;

  int n_objects() const { return static_cast<int>(x.rows()); }
  int n_features() const { return static_cast<int>(x.cols()); }
};

struct ScalingParams {
  Eigen::VectorXd means;
  Eigen::VectorXd stddevs;              // strictly positive
  std::vector<int> constant_features;   // columns whose stddev was forced to 1
};

struct SplitPair {
  Dataset train;
  Dataset test;
};

// One ensemble draw: train_k and val_k partition the training index set.
struct Subsample {
  std::vector<int> train_k;
  std::vector<int> val_k;
};

enum class ConstantFeaturePolicy { KeepWithUnitScale, Reject };

// CSV ingestion: UTF-8, mandatory header row, ',' delimiter, '.' decimal
// point. The target column may be given by name or by 0-based index.
Dataset load_csv(const std::string& path, const std::string& target_column, Task task);

void save_csv(const Dataset& data, const std::string& path,
              const std::string& target_name = "target");

// Per-feature mean and sample standard deviation (divisor I-1), fitted on
// training data only.
ScalingParams fit_standardizer(const Dataset& train,
                               ConstantFeaturePolicy policy = ConstantFeaturePolicy::KeepWithUnitScale);

Dataset apply_standardizer(const Dataset& data, const ScalingParams& params);
Dataset invert_standardizer(const Dataset& data, const ScalingParams& params);

// Deterministic train/test split. Classification splits are stratified so
// per-class counts stay within one object of exact proportionality;
// regression splits are simple random.
SplitPair stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed);

// Subset size is drawn uniformly from [floor(lo*n), floor(hi*n)], indices
// without replacement.
Subsample draw_subsample(int train_size, std::pair<double, double> fraction_range,
                         std::uint64_t seed_k);

struct SyntheticData {
  Dataset data;
  std::vector<int> informative_indices;  // sorted ground truth
};

// Gaussian features; regression targets y = x_inf * w + noise * eps,
// classification labels threshold the logistic transform of the same linear
// score at the 0.5-probability boundary.
SyntheticData make_synthetic(Task task, int n_objects, int n_features, int n_informative,
                             double noise, std::uint64_t seed);

}  // namespace rent
