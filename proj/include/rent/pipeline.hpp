#pragma once

#include <string>

#include "json.hpp"
#include "rent/config.hpp"
#include "rent/dataset.hpp"

namespace rent {

// Data resolved from a RunConfig: loaded or synthesized, split, and
// standardized with train-fitted parameters.
struct PreparedData {
  Dataset train;  // standardized
  Dataset test;   // standardized with the train parameters
  ScalingParams scaling;
  std::vector<int> informative_indices;  // synthetic inputs only
};

PreparedData prepare_data(const RunConfig& cfg);

// Full pipeline: standardize, step-1 grid, ensemble, step-2 grid, selection,
// downstream refit, test evaluation, optional studies and post-hoc exports.
// Writes report.json and the artifact files into cfg.out_dir and returns the
// report. Deterministic given master_seed, timing fields aside.
nlohmann::json run_select(const RunConfig& cfg);

// Repeated selection with derived subsample seed streams on fixed data;
// reports the Nogueira stability of the selected sets and per-run scores.
nlohmann::json run_stability(const RunConfig& cfg);

// VS1/VS2 against the artifacts of a previous run_select in cfg.out_dir.
nlohmann::json run_validate(const RunConfig& cfg);

// Object summaries and PCA exports from the artifacts of a previous
// run_select in cfg.out_dir.
nlohmann::json run_posthoc(const RunConfig& cfg);

// Writes synth_train.csv / synth_test.csv plus the ground-truth informative
// indices.
nlohmann::json run_synth(const RunConfig& cfg);

}  // namespace rent
