#include "rent/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "rent/metrics.hpp"
#include "rent/posthoc.hpp"
#include "rent/rng.hpp"
#include "rent/stats.hpp"
#include "rent/study.hpp"

namespace rent {

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.master_seed)
    throw std::invalid_argument("master_seed is mandatory (no wall-clock seeding)");
  return *cfg.master_seed;
}

// Propagates module errors with the failing pipeline stage prepended.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("stage " + std::string(name) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("stage " + std::string(name) + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path, const std::string& missing_message) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(missing_message);
  nlohmann::json j;
  in >> j;
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_weight_matrix_csv(const fs::path& path, const WeightMatrix& wm,
                             const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  for (int j = 0; j < wm.n_features(); ++j) out << (j ? "," : "") << names[static_cast<std::size_t>(j)];
  out << '\n';
  for (int k = 0; k < wm.k_models(); ++k) {
    for (int j = 0; j < wm.n_features(); ++j) out << (j ? "," : "") << fmt17(wm.b(k, j));
    out << '\n';
  }
}

void write_enet_records_csv(const fs::path& path, const std::vector<SearchRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  out << "gamma,alpha,bic,n_nonzero,converged\n";
  for (const auto& r : records)
    out << fmt17(r.gamma) << ',' << fmt17(r.alpha) << ',' << fmt17(r.bic_value) << ','
        << r.n_selected << ',' << (r.converged ? 1 : 0) << '\n';
}

void write_cutoff_records_csv(const fs::path& path, const std::vector<SearchRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  out << "t1,t2,t3,bic,n_selected,converged,skipped\n";
  for (const auto& r : records)
    out << fmt17(r.cutoffs.t1) << ',' << fmt17(r.cutoffs.t2) << ',' << fmt17(r.cutoffs.t3) << ','
        << (r.skipped ? "" : fmt17(r.bic_value)) << ',' << r.n_selected << ','
        << (r.converged ? 1 : 0) << ',' << (r.skipped ? 1 : 0) << '\n';
}

// Test metrics as {metric, class, value} rows.
nlohmann::json metric_rows(const GlmModel& model, const Eigen::MatrixXd& x_test,
                           const Eigen::VectorXd& y_test) {
  nlohmann::json rows = nlohmann::json::array();
  if (model.task == Task::Classification) {
    const Eigen::VectorXd labels = predict_labels(model, x_test);
    for (int cls : {0, 1}) {
      const ConfusionMatrix cm = confusion(y_test, labels, cls);
      rows.push_back({{"metric", "precision"}, {"class", cls}, {"value", precision(cm)}});
      rows.push_back({{"metric", "recall"}, {"class", cls}, {"value", recall(cm)}});
      rows.push_back({{"metric", "f1"}, {"class", cls}, {"value", f1(cm)}});
    }
    rows.push_back({{"metric", "mcc"},
                    {"class", nullptr},
                    {"value", mcc(confusion(y_test, labels, 1))}});
  } else {
    const Eigen::VectorXd pred = predict(model, x_test);
    rows.push_back({{"metric", "rmsep"}, {"class", nullptr}, {"value", rmsep(y_test, pred)}});
    rows.push_back({{"metric", "r2"}, {"class", nullptr}, {"value", r2(y_test, pred)}});
  }
  return rows;
}

double lookup_metric(const nlohmann::json& rows, const std::string& name) {
  for (const auto& row : rows)
    if (row.at("metric") == name) return row.at("value").get<double>();
  throw std::runtime_error("metric '" + name + "' missing from report");
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - std::floor(pos);
  return (1.0 - w) * v[lo] + w * v[hi];
}

Dataset load_csv_checked(const std::string& path, const RunConfig& cfg) {
  if (path.empty()) throw std::invalid_argument("no training data configured (train_csv or synth)");
  return load_csv(path, cfg.target, cfg.task);
}

struct SelectOutcome {
  double gamma = 0.0;
  double alpha = 0.0;
  Cutoffs cutoffs;
  SelectionResult selection;
  EnsembleOutput ensemble;
  GlmModel downstream;
  std::vector<SearchRecord> enet_records;
  std::vector<SearchRecord> cutoff_records;
};

EnsembleConfig ensemble_config(const RunConfig& cfg, double gamma, double alpha,
                               std::uint64_t seed) {
  EnsembleConfig ec;
  ec.k_models = cfg.k_models;
  ec.enet = cfg.solver_config();
  ec.enet.gamma = gamma;
  ec.enet.alpha = alpha;
  ec.fraction_range = {cfg.subsample_lo, cfg.subsample_hi};
  ec.master_seed = seed;
  ec.n_threads = cfg.n_threads;
  return ec;
}

// The selection core shared by run_select and run_stability repeats.
SelectOutcome select_once(const RunConfig& cfg, const PreparedData& data, std::uint64_t seed,
                          bool reuse_enet, double gamma, double alpha, bool reuse_cutoffs,
                          Cutoffs fixed_cutoffs) {
  SelectOutcome out;

  if (reuse_enet) {
    out.gamma = gamma;
    out.alpha = alpha;
  } else if (cfg.gamma && cfg.alpha) {
    out.gamma = *cfg.gamma;
    out.alpha = *cfg.alpha;
  } else {
    EnetSearchResult res = search_enet(data.train, cfg.enet_grid, cfg.solver_config(), cfg.n_threads);
    out.gamma = res.gamma;
    out.alpha = res.alpha;
    out.enet_records = std::move(res.records);
  }

  out.ensemble = train_ensemble(data.train, ensemble_config(cfg, out.gamma, out.alpha, seed));

  if (reuse_cutoffs) {
    out.cutoffs = fixed_cutoffs;
    out.selection = select_features(score_features(out.ensemble.weight_matrix), out.cutoffs);
    if (out.selection.delta == 0)
      throw std::runtime_error("selection is empty at the configured cutoffs");
  } else if (cfg.t1 && cfg.t2 && cfg.t3) {
    out.cutoffs = Cutoffs{*cfg.t1, *cfg.t2, *cfg.t3};
    out.selection = select_features(score_features(out.ensemble.weight_matrix), out.cutoffs);
    if (out.selection.delta == 0)
      throw std::runtime_error("selection is empty at the configured cutoffs");
  } else {
    CutoffSearchResult res =
        search_cutoffs(out.ensemble, data.train, cfg.cutoff_grid, cfg.solver_config(), cfg.n_threads);
    out.cutoffs = res.cutoffs;
    out.selection = select_features(score_features(out.ensemble.weight_matrix), out.cutoffs);
    out.cutoff_records = std::move(res.records);
  }

  out.downstream = refit_unregularized(data.train, out.selection.selected, cfg.solver_config());
  return out;
}

nlohmann::json posthoc_artifacts(const RunConfig& cfg, const Dataset& train,
                                 const EnsembleOutput& ensemble,
                                 const std::vector<int>& selected) {
  const auto summaries =
      summarize_objects(ensemble, train.y, train.task, cfg.decision_threshold);
  export_object_summaries(summaries, train.task, cfg.out_dir);

  const Dataset train_sel = apply_selection(train, selected);
  const int max_components =
      static_cast<int>(std::min<Eigen::Index>(train_sel.x.rows() - 1, train_sel.x.cols()));
  const int n_components = std::min(cfg.pca_components, max_components);
  const PcaModel pca = pca_fit(train_sel.x, n_components, cfg.standardize_pca);
  export_pca(pca, summaries, train.y, train_sel.feature_names, cfg.out_dir);

  int never_validated = 0;
  for (const auto& s : summaries)
    if (s.n_val_appearances == 0) ++never_validated;

  return nlohmann::json{
      {"n_components", n_components},
      {"explained_variance_ratio",
       std::vector<double>(pca.explained_variance_ratio.begin(),
                           pca.explained_variance_ratio.end())},
      {"objects_never_in_validation", never_validated},
  };
}

}  // namespace

PreparedData prepare_data(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  PreparedData out;
  Dataset full;
  bool have_test = false;
  Dataset test_raw;

  if (cfg.synth_enabled) {
    const int total = cfg.synth_n_train + cfg.synth_n_test;
    SyntheticData synth =
        make_synthetic(cfg.task, total, cfg.synth_n_features, cfg.synth_n_informative,
                       cfg.synth_noise, derive_seed(seed, seed_stream::kSynthetic, 0));
    out.informative_indices = synth.informative_indices;
    const double fraction = static_cast<double>(cfg.synth_n_test) / static_cast<double>(total);
    SplitPair split =
        stratified_split(synth.data, fraction, derive_seed(seed, seed_stream::kSplit, 0));
    full = std::move(split.train);
    test_raw = std::move(split.test);
    have_test = true;
  } else {
    full = load_csv_checked(cfg.train_csv, cfg);
    if (!cfg.test_csv.empty()) {
      test_raw = load_csv(cfg.test_csv, cfg.target, cfg.task);
      if (test_raw.n_features() != full.n_features())
        throw std::invalid_argument("test CSV feature count does not match train CSV");
      have_test = true;
    } else if (cfg.test_fraction > 0.0) {
      SplitPair split =
          stratified_split(full, cfg.test_fraction, derive_seed(seed, seed_stream::kSplit, 0));
      full = std::move(split.train);
      test_raw = std::move(split.test);
      have_test = true;
    }
  }
  if (!have_test)
    throw std::invalid_argument("no evaluation data: provide test_csv or test_fraction");

  out.scaling = fit_standardizer(full, cfg.constant_policy);
  if (!out.scaling.constant_features.empty() && cfg.verbose) {
    std::cerr << "warning: " << out.scaling.constant_features.size()
              << " constant feature(s) kept with unit scale\n";
  }
  out.train = apply_standardizer(full, out.scaling);
  out.test = apply_standardizer(test_raw, out.scaling);
  return out;
}

nlohmann::json run_select(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const auto t_start = clock_type::now();
  nlohmann::json timing;

  auto t = clock_type::now();
  const PreparedData data = stage("prepare_data", [&] { return prepare_data(cfg); });
  timing["prepare_data_s"] = seconds_since(t);

  t = clock_type::now();
  SelectOutcome outcome = stage(
      "selection", [&] { return select_once(cfg, data, seed, false, 0.0, 0.0, false, Cutoffs{}); });
  timing["pipeline_s"] = seconds_since(t);

  t = clock_type::now();
  const Dataset test_sel = apply_selection(data.test, outcome.selection.selected);
  const nlohmann::json test_metrics = stage(
      "evaluation", [&] { return metric_rows(outcome.downstream, test_sel.x, data.test.y); });
  const double observed =
      lookup_metric(test_metrics, cfg.task == Task::Classification ? "mcc" : "r2");

  nlohmann::json report{
      {"schema_version", 1},
      {"command", "select"},
      {"config", config_to_json(cfg)},
      {"chosen",
       {{"gamma", outcome.gamma},
        {"alpha", outcome.alpha},
        {"t1", outcome.cutoffs.t1},
        {"t2", outcome.cutoffs.t2},
        {"t3", outcome.cutoffs.t3}}},
      {"selection", outcome.selection},
      {"downstream_model", outcome.downstream},
      {"test_metrics", test_metrics},
      {"n_train", data.train.n_objects()},
      {"n_test", data.test.n_objects()},
      {"n_features", data.train.n_features()},
      {"nonconverged_models", outcome.ensemble.nonconverged_models},
  };
  {
    std::vector<std::string> names;
    for (int j : outcome.selection.selected)
      names.push_back(data.train.feature_names[static_cast<std::size_t>(j)]);
    report["selection"]["selected_names"] = names;
  }
  if (!data.informative_indices.empty())
    report["synthetic_informative_indices"] = data.informative_indices;

  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);
  write_weight_matrix_csv(out_dir / "B.csv", outcome.ensemble.weight_matrix,
                          data.train.feature_names);
  write_enet_records_csv(out_dir / "search_enet.csv", outcome.enet_records);
  write_cutoff_records_csv(out_dir / "search_cutoffs.csv", outcome.cutoff_records);

  // Bundle for later validate/posthoc invocations.
  {
    const Dataset train_sel = apply_selection(data.train, outcome.selection.selected);
    nlohmann::json bundle{
        {"task", task_name(cfg.task)},
        {"selected", outcome.selection.selected},
        {"selected_names", train_sel.feature_names},
        {"observed_score", observed},
        {"y_train", std::vector<double>(data.train.y.begin(), data.train.y.end())},
        {"ensemble", outcome.ensemble},
    };
    std::vector<std::vector<double>> x_sel(static_cast<std::size_t>(train_sel.n_objects()));
    for (int i = 0; i < train_sel.n_objects(); ++i)
      x_sel[static_cast<std::size_t>(i)] =
          std::vector<double>(train_sel.x.row(i).begin(), train_sel.x.row(i).end());
    bundle["x_train_selected"] = std::move(x_sel);
    write_json(out_dir / "ensemble.json", bundle);
  }

  if (cfg.run_vs1) {
    t = clock_type::now();
    const StudyReport r = stage("vs1", [&] {
      return vs1(data.train, data.test, outcome.selection.delta, observed, cfg.ell, seed,
                 cfg.solver_config(), cfg.n_threads);
    });
    report["vs1"] = r;
    write_json(out_dir / "vs1.json", nlohmann::json(r));
    timing["vs1_s"] = seconds_since(t);
  }
  if (cfg.run_vs2) {
    t = clock_type::now();
    const StudyReport r = stage("vs2", [&] {
      return vs2(data.train, data.test, outcome.selection.selected, cfg.ell, seed,
                 cfg.solver_config());
    });
    report["vs2"] = r;
    write_json(out_dir / "vs2.json", nlohmann::json(r));
    timing["vs2_s"] = seconds_since(t);
  }
  if (cfg.run_posthoc) {
    t = clock_type::now();
    report["posthoc"] = stage("posthoc", [&] {
      return posthoc_artifacts(cfg, data.train, outcome.ensemble, outcome.selection.selected);
    });
    timing["posthoc_s"] = seconds_since(t);
  }

  timing["total_s"] = seconds_since(t_start);
  report["timing"] = timing;
  write_json(out_dir / "report.json", report);
  return report;
}

nlohmann::json run_stability(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.n_repeats < 2) throw std::invalid_argument("stability: need n_repeats >= 2");
  const auto t_start = clock_type::now();

  const PreparedData data = prepare_data(cfg);

  // Hyperparameters are resolved once (deterministic given the master seed);
  // run-to-run variation comes from the subsample seed stream.
  SelectOutcome base = select_once(cfg, data, seed, false, 0.0, 0.0, false, Cutoffs{});

  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);

  SelectionRuns runs;
  runs.z = Eigen::MatrixXi::Zero(cfg.n_repeats, data.train.n_features());
  std::vector<double> scores;
  nlohmann::json per_run = nlohmann::json::array();
  for (int m = 0; m < cfg.n_repeats; ++m) {
    const std::uint64_t run_seed = derive_seed(seed, seed_stream::kStability,
                                               static_cast<std::uint64_t>(m));
    nlohmann::json row;
    try {
      SelectOutcome rep = select_once(cfg, data, run_seed, true, base.gamma, base.alpha, true,
                                      base.cutoffs);
      for (int j : rep.selection.selected) runs.z(m, j) = 1;
      const Dataset test_sel = apply_selection(data.test, rep.selection.selected);
      const double score = study_score(rep.downstream, test_sel.x, data.test.y);
      scores.push_back(score);
      row = {{"run", m}, {"delta", rep.selection.delta}, {"score", score},
             {"selected", rep.selection.selected}};
      per_run.push_back(row);
    } catch (const std::exception& e) {
      // Dump partial results before surfacing the failure.
      per_run.push_back({{"run", m}, {"error", e.what()}});
      write_json(out_dir / "stability.json",
                 {{"command", "stability"}, {"partial", true}, {"runs", per_run}});
      throw;
    }
  }

  const double phi = nogueira_stability(runs);
  nlohmann::json report{
      {"schema_version", 1},
      {"command", "stability"},
      {"config", config_to_json(cfg)},
      {"chosen",
       {{"gamma", base.gamma},
        {"alpha", base.alpha},
        {"t1", base.cutoffs.t1},
        {"t2", base.cutoffs.t2},
        {"t3", base.cutoffs.t3}}},
      {"n_repeats", cfg.n_repeats},
      {"k_models", cfg.k_models},
      {"stability_phi", phi},
      {"score_mean", sample_mean(scores)},
      {"score_q025", quantile(scores, 0.025)},
      {"score_q975", quantile(scores, 0.975)},
      {"runs", per_run},
      {"timing", {{"total_s", seconds_since(t_start)}}},
  };

  {
    std::ofstream z_out(out_dir / "z_matrix.csv");
    for (int m = 0; m < cfg.n_repeats; ++m) {
      for (int j = 0; j < runs.z.cols(); ++j) z_out << (j ? "," : "") << runs.z(m, j);
      z_out << '\n';
    }
  }
  write_json(out_dir / "stability.json", report);
  return report;
}

nlohmann::json run_validate(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const fs::path out_dir(cfg.out_dir);
  const nlohmann::json bundle = read_json(
      out_dir / "ensemble.json",
      "no ensemble artifact found in '" + cfg.out_dir + "' (run select first)");

  const PreparedData data = prepare_data(cfg);
  const auto selected = bundle.at("selected").get<std::vector<int>>();
  const double observed = bundle.at("observed_score").get<double>();

  nlohmann::json report{{"schema_version", 1}, {"command", "validate"}};
  if (cfg.run_vs1) {
    const StudyReport r = vs1(data.train, data.test, static_cast<int>(selected.size()),
                              observed, cfg.ell, seed, cfg.solver_config(), cfg.n_threads);
    report["vs1"] = r;
    write_json(out_dir / "vs1.json", nlohmann::json(r));
  }
  if (cfg.run_vs2) {
    const StudyReport r =
        vs2(data.train, data.test, selected, cfg.ell, seed, cfg.solver_config());
    report["vs2"] = r;
    write_json(out_dir / "vs2.json", nlohmann::json(r));
  }
  return report;
}

nlohmann::json run_posthoc(const RunConfig& cfg) {
  const fs::path out_dir(cfg.out_dir);
  const nlohmann::json bundle = read_json(
      out_dir / "ensemble.json",
      "no ensemble artifact found in '" + cfg.out_dir + "' (run select first)");

  const Task task = task_from_name(bundle.at("task").get<std::string>());
  const auto y_vec = bundle.at("y_train").get<std::vector<double>>();
  Eigen::VectorXd y_train(static_cast<Eigen::Index>(y_vec.size()));
  for (std::size_t i = 0; i < y_vec.size(); ++i) y_train(static_cast<Eigen::Index>(i)) = y_vec[i];

  EnsembleOutput ensemble = bundle.at("ensemble").get<EnsembleOutput>();

  const auto x_rows = bundle.at("x_train_selected").get<std::vector<std::vector<double>>>();
  Dataset train_sel;
  train_sel.task = task;
  train_sel.y = y_train;
  train_sel.feature_names = bundle.at("selected_names").get<std::vector<std::string>>();
  train_sel.x.resize(static_cast<Eigen::Index>(x_rows.size()),
                     static_cast<Eigen::Index>(x_rows.empty() ? 0 : x_rows[0].size()));
  for (std::size_t i = 0; i < x_rows.size(); ++i)
    for (std::size_t j = 0; j < x_rows[i].size(); ++j)
      train_sel.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x_rows[i][j];

  const auto summaries = summarize_objects(ensemble, y_train, task, cfg.decision_threshold);
  export_object_summaries(summaries, task, cfg.out_dir);

  const int max_components =
      static_cast<int>(std::min<Eigen::Index>(train_sel.x.rows() - 1, train_sel.x.cols()));
  const int n_components = std::min(cfg.pca_components, max_components);
  const PcaModel pca = pca_fit(train_sel.x, n_components, cfg.standardize_pca);
  export_pca(pca, summaries, y_train, train_sel.feature_names, cfg.out_dir);

  nlohmann::json report{
      {"schema_version", 1},
      {"command", "posthoc"},
      {"n_components", n_components},
      {"explained_variance_ratio",
       std::vector<double>(pca.explained_variance_ratio.begin(),
                           pca.explained_variance_ratio.end())},
      {"n_objects", static_cast<int>(summaries.size())},
  };
  return report;
}

nlohmann::json run_synth(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const int total = cfg.synth_n_train + cfg.synth_n_test;
  SyntheticData synth =
      make_synthetic(cfg.task, total, cfg.synth_n_features, cfg.synth_n_informative,
                     cfg.synth_noise, derive_seed(seed, seed_stream::kSynthetic, 0));
  const double fraction = static_cast<double>(cfg.synth_n_test) / static_cast<double>(total);
  SplitPair split =
      stratified_split(synth.data, fraction, derive_seed(seed, seed_stream::kSplit, 0));

  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);
  save_csv(split.train, (out_dir / "synth_train.csv").string(), cfg.target);
  save_csv(split.test, (out_dir / "synth_test.csv").string(), cfg.target);
  nlohmann::json report{
      {"schema_version", 1},
      {"command", "synth"},
      {"train_rows", split.train.n_objects()},
      {"test_rows", split.test.n_objects()},
      {"n_features", synth.data.n_features()},
      {"informative_indices", synth.informative_indices},
      {"train_csv", (out_dir / "synth_train.csv").string()},
      {"test_csv", (out_dir / "synth_test.csv").string()},
  };
  write_json(out_dir / "synth.json", report);
  return report;
}

}  // namespace rent
