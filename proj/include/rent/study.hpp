#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "rent/dataset.hpp"
#include "rent/glm.hpp"

namespace rent {

enum class StudyKind { VS1, VS2 };

struct StudyReport {
  StudyKind study_kind = StudyKind::VS1;
  double observed_score = 0.0;         // the selected-features model's MCC or R^2
  std::vector<double> null_scores;     // one per draw, refit failures excluded
  double p_value = 1.0;
  int excluded_count = 0;
};

// Randomization study 1: ell random feature subsets of size delta, each used
// to refit the downstream unregularized GLM on train and score it on test
// (MCC for classification, R^2 for regression). One-sided t-test of the
// observed score against the null sample.
StudyReport vs1(const Dataset& train, const Dataset& test, int delta, double observed_score,
                int ell, std::uint64_t seed, const ElasticNetConfig& refit_base,
                int n_threads = 0);

// Randomization study 2: the downstream model is fit once on the selected
// features and scored against ell independent permutations of the test
// labels; same t-test construction.
StudyReport vs2(const Dataset& train, const Dataset& test, const std::vector<int>& selected,
                int ell, std::uint64_t seed, const ElasticNetConfig& refit_base);

// Test-set score used throughout the studies: MCC at the 0.5 threshold for
// classification, R^2 for regression.
double study_score(const GlmModel& model, const Eigen::MatrixXd& x_test,
                   const Eigen::VectorXd& y_test);

void to_json(nlohmann::json& j, const StudyReport& r);

}  // namespace rent
