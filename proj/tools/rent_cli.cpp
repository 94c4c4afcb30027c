// Command-line driver for the RENT feature-selection engine. All engine work
// goes through the C API in rent/rent_c.h; this file only parses arguments
// and prints summaries.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rent/rent_c.h"

namespace {

using ConfigPtr = std::unique_ptr<rent_config, decltype(&rent_config_destroy)>;
using ReportPtr = std::unique_ptr<rent_report, decltype(&rent_report_destroy)>;

struct CommonArgs {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers --config plus one override flag per config key, so every file
// key can be set from the command line under the same name.
void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key/value config file");
  static const std::vector<std::string> keys = {
      "train_csv", "test_csv", "target", "task", "test_fraction",
      "synth", "synth_n_train", "synth_n_test", "synth_n_features",
      "synth_n_informative", "synth_noise",
      "k_models", "subsample_lo", "subsample_hi",
      "gammas", "alphas", "gamma", "alpha",
      "t1_values", "t2_values", "t3_values", "t1", "t2", "t3",
      "tol", "max_iter",
      "ell", "run_vs1", "run_vs2", "run_posthoc", "standardize_pca",
      "pca_components", "n_repeats", "decision_threshold",
      "master_seed", "out_dir", "n_threads", "verbose", "constant_feature_policy",
  };
  for (const auto& key : keys) {
    cmd->add_option_function<std::string>(
        "--" + key,
        [&args, key](const std::string& value) { args.overrides.emplace_back(key, value); },
        "config key '" + key + "'");
  }
  // Global spellings from the docs; aliases for the config keys above.
  cmd->add_option_function<std::string>(
      "--seed", [&args](const std::string& v) { args.overrides.emplace_back("master_seed", v); },
      "alias for --master_seed");
  cmd->add_option_function<std::string>(
      "--out", [&args](const std::string& v) { args.overrides.emplace_back("out_dir", v); },
      "alias for --out_dir");
  cmd->add_option_function<std::string>(
      "--threads", [&args](const std::string& v) { args.overrides.emplace_back("n_threads", v); },
      "alias for --n_threads");
}

int fail(const std::string& stage) {
  std::fprintf(stderr, "rent: %s: %s\n", stage.c_str(), rent_last_error());
  return 1;
}

ConfigPtr build_config(const CommonArgs& args, int& status) {
  ConfigPtr cfg(rent_config_create(), rent_config_destroy);
  status = 0;
  if (!args.config_path.empty() && rent_config_load(cfg.get(), args.config_path.c_str()) != RENT_OK) {
    status = fail("loading config");
    return cfg;
  }
  for (const auto& [key, value] : args.overrides) {
    if (rent_config_set(cfg.get(), key.c_str(), value.c_str()) != RENT_OK) {
      status = fail("setting --" + key);
      return cfg;
    }
  }
  return cfg;
}

void print_summary(const std::string& command, const nlohmann::json& report) {
  if (command == "select") {
    const auto& chosen = report.at("chosen");
    std::printf("chosen: gamma=%g alpha=%g cutoffs=(%g, %g, %g)\n",
                chosen.at("gamma").get<double>(), chosen.at("alpha").get<double>(),
                chosen.at("t1").get<double>(), chosen.at("t2").get<double>(),
                chosen.at("t3").get<double>());
    std::printf("selected %d feature(s):", report.at("selection").at("delta").get<int>());
    for (const auto& name : report.at("selection").at("selected_names"))
      std::printf(" %s", name.get<std::string>().c_str());
    std::printf("\n");
    for (const auto& row : report.at("test_metrics")) {
      if (row.at("class").is_null())
        std::printf("test %s: %.4f\n", row.at("metric").get<std::string>().c_str(),
                    row.at("value").get<double>());
      else
        std::printf("test %s (class %d): %.4f\n", row.at("metric").get<std::string>().c_str(),
                    row.at("class").get<int>(), row.at("value").get<double>());
    }
    for (const char* study : {"vs1", "vs2"})
      if (report.contains(study))
        std::printf("%s: p=%.3g null_mean=%.4f\n", study,
                    report.at(study).at("p_value").get<double>(),
                    report.at(study).at("null_mean").get<double>());
  } else if (command == "stability") {
    std::printf("stability phi=%.4f over %d runs (K=%d)\n",
                report.at("stability_phi").get<double>(), report.at("n_repeats").get<int>(),
                report.at("k_models").get<int>());
    std::printf("score mean=%.4f q2.5=%.4f q97.5=%.4f\n", report.at("score_mean").get<double>(),
                report.at("score_q025").get<double>(), report.at("score_q975").get<double>());
  } else if (command == "validate") {
    for (const char* study : {"vs1", "vs2"})
      if (report.contains(study))
        std::printf("%s: observed=%.4f null_mean=%.4f p=%.3g\n", study,
                    report.at(study).at("observed_score").get<double>(),
                    report.at(study).at("null_mean").get<double>(),
                    report.at(study).at("p_value").get<double>());
  } else if (command == "synth") {
    std::printf("wrote %s (%d rows) and %s (%d rows)\n",
                report.at("train_csv").get<std::string>().c_str(),
                report.at("train_rows").get<int>(),
                report.at("test_csv").get<std::string>().c_str(),
                report.at("test_rows").get<int>());
  } else if (command == "posthoc") {
    std::printf("posthoc exports written (%d PCA component(s))\n",
                report.at("n_components").get<int>());
  }
}

int run(const std::string& command, const CommonArgs& args, bool verbose) {
  int status = 0;
  ConfigPtr cfg = build_config(args, status);
  if (status != 0) return status;

  rent_status (*fn)(const rent_config*, rent_report**) = nullptr;
  if (command == "select") fn = rent_run_select;
  else if (command == "stability") fn = rent_run_stability;
  else if (command == "validate") fn = rent_run_validate;
  else if (command == "posthoc") fn = rent_run_posthoc;
  else if (command == "synth") fn = rent_run_synth;

  rent_report* raw = nullptr;
  if (fn(cfg.get(), &raw) != RENT_OK) return fail(command);
  ReportPtr report(raw, rent_report_destroy);

  const auto parsed = nlohmann::json::parse(rent_report_json(report.get()));
  print_summary(command, parsed);
  if (verbose) std::printf("%s\n", rent_report_json(report.get()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("RENT feature selection (engine ") + rent_version() + ")"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"select", "run the full selection pipeline and write report.json"},
      {"stability", "repeat selection with derived seeds and report stability"},
      {"validate", "run the VS1/VS2 randomization studies for a prior select run"},
      {"posthoc", "export object summaries and PCA tables for a prior select run"},
      {"synth", "generate synthetic train/test CSV files"},
  };

  std::vector<std::unique_ptr<CommonArgs>> all_args;
  bool verbose = false;
  app.add_flag("--verbose", verbose, "print the full report JSON");
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    all_args.push_back(std::make_unique<CommonArgs>());
    add_common_options(cmd, *all_args.back());
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (app.get_subcommand(subs[i].name)->parsed())
      return run(subs[i].name, *all_args[i], verbose);
  }
  return 1;
}
