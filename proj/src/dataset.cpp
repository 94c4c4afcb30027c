#include "rent/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rent/rng.hpp"

namespace rent {

const char* task_name(Task task) {
  return task == Task::Classification ? "classification" : "regression";
}

Task task_from_name(const std::string& name) {
  if (name == "classification") return Task::Classification;
  if (name == "regression") return Task::Regression;
  throw std::invalid_argument("unknown task '" + name + "' (expected classification or regression)");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
  const std::string t = trim(cell);
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("non-numeric cell '" + t + "' at data row " +
                                std::to_string(row) + ", column '" + col + "'");
  }
  if (pos != t.size())
    throw std::invalid_argument("non-numeric cell '" + t + "' at data row " +
                                std::to_string(row) + ", column '" + col + "'");
  if (!std::isfinite(v))
    throw std::invalid_argument("non-finite cell at data row " + std::to_string(row) +
                                ", column '" + col + "'");
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column, Task task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV '" + path + "' (header row required)");
  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);

  // Target column by name, falling back to a 0-based index.
  int target_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == target_column) target_idx = static_cast<int>(j);
  if (target_idx < 0) {
    try {
      std::size_t pos = 0;
      int idx = std::stoi(target_column, &pos);
      if (pos == target_column.size() && idx >= 0 && idx < static_cast<int>(header.size()))
        target_idx = idx;
    } catch (const std::exception&) {
    }
  }
  if (target_idx < 0)
    throw std::invalid_argument("target column '" + target_column + "' not found in '" + path + "'");

  const int n_cols = static_cast<int>(header.size());
  const int n_feat = n_cols - 1;
  if (n_feat < 1) throw std::invalid_argument("CSV '" + path + "' has no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_no;
    std::vector<std::string> cells = split_line(line);
    if (static_cast<int>(cells.size()) != n_cols)
      throw std::invalid_argument("row " + std::to_string(row_no) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(n_cols));
    std::vector<double> feat;
    feat.reserve(static_cast<std::size_t>(n_feat));
    for (int j = 0; j < n_cols; ++j) {
      const double v = parse_cell(cells[static_cast<std::size_t>(j)], row_no, header[static_cast<std::size_t>(j)]);
      if (j == target_idx)
        targets.push_back(v);
      else
        feat.push_back(v);
    }
    rows.push_back(std::move(feat));
  }
  if (rows.size() < 2) throw std::invalid_argument("CSV '" + path + "' needs at least 2 data rows");

  Dataset d;
  d.task = task;
  d.x.resize(static_cast<Eigen::Index>(rows.size()), n_feat);
  d.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < n_feat; ++j) d.x(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    d.y(static_cast<Eigen::Index>(i)) = targets[i];
  }
  for (int j = 0; j < n_cols; ++j)
    if (j != target_idx) d.feature_names.push_back(header[static_cast<std::size_t>(j)]);

  if (task == Task::Classification) {
    for (Eigen::Index i = 0; i < d.y.size(); ++i) {
      if (d.y(i) != 0.0 && d.y(i) != 1.0)
        throw std::invalid_argument("invalid class label " + std::to_string(d.y(i)) +
                                    " at data row " + std::to_string(i + 1) +
                                    " (classification targets must be 0 or 1)");
    }
  }
  return d;
}

void save_csv(const Dataset& data, const std::string& path, const std::string& target_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  for (int j = 0; j < data.n_features(); ++j) out << data.feature_names[static_cast<std::size_t>(j)] << ',';
  out << target_name << '\n';
  char buf[40];
  for (int i = 0; i < data.n_objects(); ++i) {
    for (int j = 0; j < data.n_features(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.x(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", data.y(i));
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

ScalingParams fit_standardizer(const Dataset& train, ConstantFeaturePolicy policy) {
  const int n = train.n_features();
  const int rows = train.n_objects();
  if (rows < 2) throw std::invalid_argument("fit_standardizer: need at least 2 objects");
  ScalingParams p;
  p.means.resize(n);
  p.stddevs.resize(n);
  for (int j = 0; j < n; ++j) {
    const double mean = train.x.col(j).mean();
    const double ss = (train.x.col(j).array() - mean).square().sum();
    double sd = std::sqrt(ss / static_cast<double>(rows - 1));
    if (sd == 0.0) {
      if (policy == ConstantFeaturePolicy::Reject)
        throw std::invalid_argument("constant feature '" +
                                    train.feature_names[static_cast<std::size_t>(j)] +
                                    "' (column " + std::to_string(j) + ")");
      sd = 1.0;
      p.constant_features.push_back(j);
    }
    p.means(j) = mean;
    p.stddevs(j) = sd;
  }
  return p;
}

Dataset apply_standardizer(const Dataset& data, const ScalingParams& params) {
  if (data.n_features() != params.means.size())
    throw std::invalid_argument("apply_standardizer: column count mismatch");
  Dataset out = data;
  out.x = (data.x.rowwise() - params.means.transpose()).array().rowwise() /
          params.stddevs.transpose().array();
  return out;
}

Dataset invert_standardizer(const Dataset& data, const ScalingParams& params) {
  if (data.n_features() != params.means.size())
    throw std::invalid_argument("invert_standardizer: column count mismatch");
  Dataset out = data;
  out.x = (data.x.array().rowwise() * params.stddevs.transpose().array()).rowwise() +
          params.means.transpose().array();
  return out;
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<int>& idx) {
  Dataset out;
  out.task = data.task;
  out.feature_names = data.feature_names;
  out.x.resize(static_cast<Eigen::Index>(idx.size()), data.x.cols());
  out.y.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = data.x.row(idx[i]);
    out.y(static_cast<Eigen::Index>(i)) = data.y(idx[i]);
  }
  return out;
}

}  // namespace

SplitPair stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must lie in (0,1)");
  const int n = data.n_objects();
  if (static_cast<double>(n) * test_fraction < 1.0)
    throw std::invalid_argument("test_fraction too small: empty test set");

  Rng rng(seed);
  std::vector<int> test_idx, train_idx;

  if (data.task == Task::Classification) {
    std::vector<int> class0, class1;
    for (int i = 0; i < n; ++i) (data.y(i) == 0.0 ? class0 : class1).push_back(i);
    for (auto* cls : {&class0, &class1}) {
      if (!cls->empty() && cls->size() < 2)
        throw std::invalid_argument("stratified_split: a class has fewer than 2 objects");
    }
    // Largest-remainder allocation: the test set gets exactly
    // round(test_fraction * I) objects while each class stays within one
    // object of exact proportionality.
    const auto target_total =
        static_cast<long>(std::llround(test_fraction * static_cast<double>(n)));
    std::vector<std::vector<int>*> classes;
    for (auto* cls : {&class0, &class1})
      if (!cls->empty()) classes.push_back(cls);
    std::vector<long> counts;
    std::vector<std::pair<double, std::size_t>> remainders;
    long allocated = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double exact = test_fraction * static_cast<double>(classes[c]->size());
      counts.push_back(static_cast<long>(std::floor(exact)));
      remainders.emplace_back(exact - std::floor(exact), c);
      allocated += counts.back();
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t r = 0; r < remainders.size() && allocated < target_total; ++r) {
      const std::size_t c = remainders[r].second;
      if (counts[c] + 1 < static_cast<long>(classes[c]->size())) {
        ++counts[c];
        ++allocated;
      }
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
      rng.shuffle(*classes[c]);
      for (std::size_t i = 0; i < classes[c]->size(); ++i)
        (static_cast<long>(i) < counts[c] ? test_idx : train_idx).push_back((*classes[c])[i]);
    }
  } else {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(all);
    const auto n_test =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < all.size(); ++i)
      (i < n_test ? test_idx : train_idx).push_back(all[i]);
  }

  if (train_idx.empty() || test_idx.empty())
    throw std::invalid_argument("stratified_split: degenerate split (empty part)");
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return SplitPair{take_rows(data, train_idx), take_rows(data, test_idx)};
}

Subsample draw_subsample(int train_size, std::pair<double, double> fraction_range,
                         std::uint64_t seed_k) {
  const auto [lo, hi] = fraction_range;
  if (!(lo > 0.0 && hi < 1.0 + 1e-12 && lo <= hi))
    throw std::invalid_argument("draw_subsample: fraction range must satisfy 0 < lo <= hi < 1");
  const int min_size = static_cast<int>(std::floor(lo * train_size));
  const int max_size = static_cast<int>(std::floor(hi * train_size));
  if (min_size < 1 || max_size >= train_size)
    throw std::invalid_argument("draw_subsample: degenerate range (empty train_k or val_k)");

  Rng rng(seed_k);
  const int size =
      min_size + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_size - min_size + 1)));
  Subsample s;
  s.train_k = rng.sample_without_replacement(train_size, size);
  s.val_k.reserve(static_cast<std::size_t>(train_size - size));
  std::size_t pos = 0;
  for (int i = 0; i < train_size; ++i) {
    if (pos < s.train_k.size() && s.train_k[pos] == i)
      ++pos;
    else
      s.val_k.push_back(i);
  }
  return s;
}

SyntheticData make_synthetic(Task task, int n_objects, int n_features, int n_informative,
                             double noise, std::uint64_t seed) {
  if (n_informative > n_features)
    throw std::invalid_argument("make_synthetic: n_informative > n_features");
  if (n_objects < 2 || n_features < 1)
    throw std::invalid_argument("make_synthetic: need n_objects >= 2 and n_features >= 1");
  if (noise < 0.0) throw std::invalid_argument("make_synthetic: noise must be >= 0");

  Rng rng(seed);
  SyntheticData out;
  out.data.task = task;
  out.data.x.resize(n_objects, n_features);
  for (int i = 0; i < n_objects; ++i)
    for (int j = 0; j < n_features; ++j) out.data.x(i, j) = rng.normal();

  out.informative_indices = rng.sample_without_replacement(n_features, n_informative);

  // Weight magnitudes in [1,2] with random sign keep the informative columns
  // unambiguously relevant.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n_features);
  for (int idx : out.informative_indices) {
    const double mag = 1.0 + rng.uniform01();
    w(idx) = rng.uniform01() < 0.5 ? -mag : mag;
  }

  Eigen::VectorXd score = out.data.x * w;
  for (int i = 0; i < n_objects; ++i) score(i) += noise * rng.normal();

  out.data.y.resize(n_objects);
  if (task == Task::Regression) {
    out.data.y = score;
  } else {
    // sigmoid(score) >= 0.5  <=>  score >= 0
    for (int i = 0; i < n_objects; ++i) out.data.y(i) = score(i) >= 0.0 ? 1.0 : 0.0;
  }

  out.data.feature_names.reserve(static_cast<std::size_t>(n_features));
  for (int j = 0; j < n_features; ++j) out.data.feature_names.push_back("f" + std::to_string(j));
  return out;
}

}  // namespace rent
