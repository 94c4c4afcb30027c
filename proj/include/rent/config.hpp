#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "rent/dataset.hpp"
#include "rent/ensemble.hpp"
#include "rent/hyper.hpp"

namespace rent {

// Everything a run needs, resolvable from a key/value config file with
// command-line overrides. See README for the file grammar and key list.
struct RunConfig {
  // Input: either a training CSV or a synthetic data spec.
  std::string train_csv;
  std::string test_csv;
  std::string target = "target";
  Task task = Task::Classification;
  double test_fraction = 0.0;  // 0 means unset

  bool synth_enabled = false;
  int synth_n_train = 175;
  int synth_n_test = 75;
  int synth_n_features = 1000;
  int synth_n_informative = 10;
  double synth_noise = 1.0;

  // Ensemble.
  int k_models = 100;
  double subsample_lo = 0.5;
  double subsample_hi = 0.5;

  // Step 1: grid unless both gamma and alpha are pinned.
  EnetGrid enet_grid;
  std::optional<double> gamma;
  std::optional<double> alpha;

  // Step 2: grid unless all of t1, t2, t3 are pinned.
  CutoffGrid cutoff_grid;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> t3;

  // Solver.
  double tol = 1e-5;
  int max_iter = 1000;

  // Studies, post hoc, stability.
  int ell = 100;
  bool run_vs1 = true;
  bool run_vs2 = true;
  bool run_posthoc = true;
  bool standardize_pca = false;
  int pca_components = 2;
  int n_repeats = 30;
  double decision_threshold = 0.5;

  std::optional<std::uint64_t> master_seed;  // mandatory, no wall-clock fallback
  std::string out_dir = "rent_out";
  int n_threads = 0;
  bool verbose = false;
  ConstantFeaturePolicy constant_policy = ConstantFeaturePolicy::KeepWithUnitScale;

  ElasticNetConfig solver_config() const {
    ElasticNetConfig c;
    c.tol = tol;
    c.max_iter = max_iter;
    return c;
  }
};

RunConfig parse_config_file(const std::string& path);

// Applies one key/value pair (the config file and CLI overrides share this).
// Throws on unknown keys or malformed values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// All known config keys, for CLI flag registration.
const std::vector<std::string>& config_keys();

nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace rent
