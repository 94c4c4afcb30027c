#include "rent/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rent {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value + "'");
  }
  if (pos != value.size())
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value + "'");
  return v;
}

long parse_integer(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  const long i = static_cast<long>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, std::string value) {
  value = trim(value);
  if (value.size() >= 2 && value.front() == '[' && value.back() == ']')
    value = value.substr(1, value.size() - 2);
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number(key, item));
  }
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
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
  return keys;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = unquote(trim(raw));
  if (key == "train_csv") cfg.train_csv = value;
  else if (key == "test_csv") cfg.test_csv = value;
  else if (key == "target") cfg.target = value;
  else if (key == "task") cfg.task = task_from_name(value);
  else if (key == "test_fraction") cfg.test_fraction = parse_number(key, value);
  else if (key == "synth") cfg.synth_enabled = parse_bool(key, value);
  else if (key == "synth_n_train") cfg.synth_n_train = static_cast<int>(parse_integer(key, value));
  else if (key == "synth_n_test") cfg.synth_n_test = static_cast<int>(parse_integer(key, value));
  else if (key == "synth_n_features") cfg.synth_n_features = static_cast<int>(parse_integer(key, value));
  else if (key == "synth_n_informative") cfg.synth_n_informative = static_cast<int>(parse_integer(key, value));
  else if (key == "synth_noise") cfg.synth_noise = parse_number(key, value);
  else if (key == "k_models") cfg.k_models = static_cast<int>(parse_integer(key, value));
  else if (key == "subsample_lo") cfg.subsample_lo = parse_number(key, value);
  else if (key == "subsample_hi") cfg.subsample_hi = parse_number(key, value);
  else if (key == "gammas") cfg.enet_grid.gammas = parse_list(key, value);
  else if (key == "alphas") cfg.enet_grid.alphas = parse_list(key, value);
  else if (key == "gamma") cfg.gamma = parse_number(key, value);
  else if (key == "alpha") cfg.alpha = parse_number(key, value);
  else if (key == "t1_values") cfg.cutoff_grid.t1_values = parse_list(key, value);
  else if (key == "t2_values") cfg.cutoff_grid.t2_values = parse_list(key, value);
  else if (key == "t3_values") cfg.cutoff_grid.t3_values = parse_list(key, value);
  else if (key == "t1") cfg.t1 = parse_number(key, value);
  else if (key == "t2") cfg.t2 = parse_number(key, value);
  else if (key == "t3") cfg.t3 = parse_number(key, value);
  else if (key == "tol") cfg.tol = parse_number(key, value);
  else if (key == "max_iter") cfg.max_iter = static_cast<int>(parse_integer(key, value));
  else if (key == "ell") cfg.ell = static_cast<int>(parse_integer(key, value));
  else if (key == "run_vs1") cfg.run_vs1 = parse_bool(key, value);
  else if (key == "run_vs2") cfg.run_vs2 = parse_bool(key, value);
  else if (key == "run_posthoc") cfg.run_posthoc = parse_bool(key, value);
  else if (key == "standardize_pca") cfg.standardize_pca = parse_bool(key, value);
  else if (key == "pca_components") cfg.pca_components = static_cast<int>(parse_integer(key, value));
  else if (key == "n_repeats") cfg.n_repeats = static_cast<int>(parse_integer(key, value));
  else if (key == "decision_threshold") cfg.decision_threshold = parse_number(key, value);
  else if (key == "master_seed") cfg.master_seed = static_cast<std::uint64_t>(parse_integer(key, value));
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "n_threads") cfg.n_threads = static_cast<int>(parse_integer(key, value));
  else if (key == "verbose") cfg.verbose = parse_bool(key, value);
  else if (key == "constant_feature_policy") {
    if (value == "keep") cfg.constant_policy = ConstantFeaturePolicy::KeepWithUnitScale;
    else if (value == "reject") cfg.constant_policy = ConstantFeaturePolicy::Reject;
    else throw std::invalid_argument("config key 'constant_feature_policy': expected keep or reject");
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments, respecting quoted strings.
    bool in_quote = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_quote) {
        if (c == quote) in_quote = false;
      } else if (c == '"' || c == '\'') {
        in_quote = true;
        quote = c;
      } else if (c == '#') {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_value(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j{
      {"train_csv", cfg.train_csv},
      {"test_csv", cfg.test_csv},
      {"target", cfg.target},
      {"task", task_name(cfg.task)},
      {"test_fraction", cfg.test_fraction},
      {"synth", cfg.synth_enabled},
      {"k_models", cfg.k_models},
      {"subsample_lo", cfg.subsample_lo},
      {"subsample_hi", cfg.subsample_hi},
      {"gammas", cfg.enet_grid.gammas},
      {"alphas", cfg.enet_grid.alphas},
      {"t1_values", cfg.cutoff_grid.t1_values},
      {"t2_values", cfg.cutoff_grid.t2_values},
      {"t3_values", cfg.cutoff_grid.t3_values},
      {"tol", cfg.tol},
      {"max_iter", cfg.max_iter},
      {"ell", cfg.ell},
      {"run_vs1", cfg.run_vs1},
      {"run_vs2", cfg.run_vs2},
      {"run_posthoc", cfg.run_posthoc},
      {"standardize_pca", cfg.standardize_pca},
      {"pca_components", cfg.pca_components},
      {"n_repeats", cfg.n_repeats},
      {"decision_threshold", cfg.decision_threshold},
      {"out_dir", cfg.out_dir},
      {"n_threads", cfg.n_threads},
      {"constant_feature_policy",
       cfg.constant_policy == ConstantFeaturePolicy::Reject ? "reject" : "keep"},
  };
  if (cfg.master_seed) j["master_seed"] = *cfg.master_seed;
  if (cfg.gamma) j["gamma"] = *cfg.gamma;
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  if (cfg.t1) j["t1"] = *cfg.t1;
  if (cfg.t2) j["t2"] = *cfg.t2;
  if (cfg.t3) j["t3"] = *cfg.t3;
  if (cfg.synth_enabled) {
    j["synth_n_train"] = cfg.synth_n_train;
    j["synth_n_test"] = cfg.synth_n_test;
    j["synth_n_features"] = cfg.synth_n_features;
    j["synth_n_informative"] = cfg.synth_n_informative;
    j["synth_noise"] = cfg.synth_noise;
  }
  return j;
}

}  // namespace rent
