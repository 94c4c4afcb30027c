#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rent/dataset.hpp"
#include "rent/ensemble.hpp"

namespace rent {

// Per-object digest of the validation-set predictions collected while
// training the ensemble.
struct ObjectSummary {
  int object_index = 0;
  int n_val_appearances = 0;
  double true_target = 0.0;
  int n_incorrect = 0;        // classification only
  double pct_incorrect = 0.0; // NaN when the object never entered a validation set
  double mean_probc1 = 0.0;   // classification; NaN when no appearances
  double mean_abs_error = 0.0;  // regression; NaN when no appearances
  std::vector<double> values;   // raw ProbC1 (classification) or abs errors (regression)
};

std::vector<ObjectSummary> summarize_objects(const EnsembleOutput& ensemble,
                                             const Eigen::VectorXd& y_train, Task task,
                                             double decision_threshold = 0.5);

struct PcaModel {
  int component_count = 0;
  Eigen::MatrixXd scores;                // I x C
  Eigen::MatrixXd loadings;              // N_sel x C, orthonormal columns
  Eigen::MatrixXd correlation_loadings;  // N_sel x C, entries in [-1,1]
  Eigen::VectorXd explained_variance_ratio;  // fractions of total variance
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_scales;  // all ones unless fitted with standardize
};

// Principal axes of the (centered, optionally re-standardized) input by SVD.
// Sign convention: the largest-magnitude entry of every loading column is
// positive, so serialized output is reproducible.
PcaModel pca_fit(const Eigen::MatrixXd& x_selected, int n_components, bool standardize = false);

// Pearson correlation of each input column with each score column. A
// zero-variance column (either side) contributes 0.
Eigen::MatrixXd correlation_loadings(const PcaModel& model, const Eigen::MatrixXd& x_selected);

// objects.csv plus the histogram-ready raw value table (probc1.csv or
// abs_errors.csv).
void export_object_summaries(const std::vector<ObjectSummary>& summaries, Task task,
                             const std::string& out_dir);

// scores.csv (per-object scores with hue columns) and corr_loadings.csv
// (per-feature correlation loadings with the 50%/100% circle references).
void export_pca(const PcaModel& pca, const std::vector<ObjectSummary>& summaries,
                const Eigen::VectorXd& y_train, const std::vector<std::string>& feature_names,
                const std::string& out_dir);

}  // namespace rent
