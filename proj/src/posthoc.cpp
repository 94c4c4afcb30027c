#include "rent/posthoc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rent {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<ObjectSummary> summarize_objects(const EnsembleOutput& ensemble,
                                             const Eigen::VectorXd& y_train, Task task,
                                             double decision_threshold) {
  if (static_cast<Eigen::Index>(ensemble.object_records.size()) != y_train.size())
    throw std::invalid_argument("summarize_objects: record count does not match y_train");

  std::vector<ObjectSummary> out;
  out.reserve(ensemble.object_records.size());
  for (std::size_t i = 0; i < ensemble.object_records.size(); ++i) {
    const auto& recs = ensemble.object_records[i];
    ObjectSummary s;
    s.object_index = static_cast<int>(i);
    s.n_val_appearances = static_cast<int>(recs.size());
    s.true_target = y_train(static_cast<Eigen::Index>(i));
    if (recs.empty()) {
      s.pct_incorrect = kNaN;
      s.mean_probc1 = kNaN;
      s.mean_abs_error = kNaN;
      out.push_back(std::move(s));
      continue;
    }
    double sum = 0.0;
    for (const auto& rec : recs) {
      if (task == Task::Classification) {
        const double label = rec.prediction >= decision_threshold ? 1.0 : 0.0;
        if (label != s.true_target) ++s.n_incorrect;
        s.values.push_back(rec.prediction);
        sum += rec.prediction;
      } else {
        const double err = std::fabs(rec.prediction - s.true_target);
        s.values.push_back(err);
        sum += err;
      }
    }
    const double n = static_cast<double>(recs.size());
    if (task == Task::Classification) {
      s.pct_incorrect = 100.0 * static_cast<double>(s.n_incorrect) / n;
      s.mean_probc1 = sum / n;
      s.mean_abs_error = kNaN;
    } else {
      s.mean_abs_error = sum / n;
      s.pct_incorrect = kNaN;
      s.mean_probc1 = kNaN;
    }
    out.push_back(std::move(s));
  }
  return out;
}

PcaModel pca_fit(const Eigen::MatrixXd& x_selected, int n_components, bool standardize) {
  const Eigen::Index rows = x_selected.rows();
  const Eigen::Index cols = x_selected.cols();
  if (rows < 2 || cols < 1) throw std::invalid_argument("pca_fit: need I >= 2 and N_sel >= 1");
  const Eigen::Index max_components = std::min(rows - 1, cols);
  if (n_components < 1 || n_components > max_components)
    throw std::invalid_argument("pca_fit: n_components out of range (max " +
                                std::to_string(max_components) + ")");

  PcaModel m;
  m.component_count = n_components;
  m.column_means = x_selected.colwise().mean();
  m.column_scales = Eigen::VectorXd::Ones(cols);
  Eigen::MatrixXd centered = x_selected.rowwise() - m.column_means.transpose();
  if (standardize) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double sd = std::sqrt(centered.col(j).squaredNorm() / static_cast<double>(rows - 1));
      if (sd == 0.0) sd = 1.0;
      m.column_scales(j) = sd;
      centered.col(j) /= sd;
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  const double total_variance = centered.squaredNorm();
  m.scores.resize(rows, n_components);
  m.loadings.resize(cols, n_components);
  m.explained_variance_ratio.resize(n_components);
  for (int c = 0; c < n_components; ++c) {
    Eigen::VectorXd axis = svd.matrixV().col(c);
    // Pin the reflection ambiguity.
    Eigen::Index argmax = 0;
    axis.cwiseAbs().maxCoeff(&argmax);
    const double flip = axis(argmax) < 0.0 ? -1.0 : 1.0;
    m.loadings.col(c) = flip * axis;
    m.scores.col(c) = flip * svd.matrixU().col(c) * sv(c);
    m.explained_variance_ratio(c) =
        total_variance == 0.0 ? 0.0 : sv(c) * sv(c) / total_variance;
  }
  m.correlation_loadings = correlation_loadings(m, x_selected);
  return m;
}

Eigen::MatrixXd correlation_loadings(const PcaModel& model, const Eigen::MatrixXd& x_selected) {
  if (x_selected.rows() != model.scores.rows())
    throw std::invalid_argument("correlation_loadings: row count does not match fitted scores");
  if (x_selected.cols() != model.loadings.rows())
    throw std::invalid_argument("correlation_loadings: column count does not match fitted loadings");

  const Eigen::Index cols = x_selected.cols();
  Eigen::MatrixXd corr(cols, model.component_count);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Eigen::VectorXd xc = x_selected.col(j).array() - x_selected.col(j).mean();
    const double x_norm = xc.norm();
    for (int c = 0; c < model.component_count; ++c) {
      const Eigen::VectorXd sc =
          model.scores.col(c).array() - model.scores.col(c).mean();
      const double s_norm = sc.norm();
      corr(j, c) = (x_norm == 0.0 || s_norm == 0.0) ? 0.0 : xc.dot(sc) / (x_norm * s_norm);
    }
  }
  return corr;
}

void export_object_summaries(const std::vector<ObjectSummary>& summaries, Task task,
                             const std::string& out_dir) {
  auto objects = open_out(out_dir, "objects.csv");
  objects << "object_index,n_val,true_target,n_incorrect,pct_incorrect,"
          << (task == Task::Classification ? "mean_probc1" : "mean_abs_error") << '\n';
  for (const auto& s : summaries) {
    objects << s.object_index << ',' << s.n_val_appearances << ',' << fmt(s.true_target) << ','
            << s.n_incorrect << ',' << fmt(s.pct_incorrect) << ','
            << fmt(task == Task::Classification ? s.mean_probc1 : s.mean_abs_error) << '\n';
  }

  // Raw per-appearance values in long format for histogram plots.
  auto values = open_out(out_dir, task == Task::Classification ? "probc1.csv" : "abs_errors.csv");
  values << "object_index,true_target,value\n";
  for (const auto& s : summaries)
    for (double v : s.values)
      values << s.object_index << ',' << fmt(s.true_target) << ',' << fmt(v) << '\n';
}

void export_pca(const PcaModel& pca, const std::vector<ObjectSummary>& summaries,
                const Eigen::VectorXd& y_train, const std::vector<std::string>& feature_names,
                const std::string& out_dir) {
  if (pca.scores.rows() != y_train.size())
    throw std::invalid_argument("export_pca: score rows do not match y_train");

  auto scores = open_out(out_dir, "scores.csv");
  scores << "object_index";
  for (int c = 0; c < pca.component_count; ++c) scores << ",comp" << (c + 1);
  scores << ",true_target,pct_incorrect,mean_probc1\n";
  for (Eigen::Index i = 0; i < pca.scores.rows(); ++i) {
    scores << i;
    for (int c = 0; c < pca.component_count; ++c) scores << ',' << fmt(pca.scores(i, c));
    const bool have = i < static_cast<Eigen::Index>(summaries.size());
    scores << ',' << fmt(y_train(i)) << ',' << fmt(have ? summaries[static_cast<std::size_t>(i)].pct_incorrect : kNaN)
           << ',' << fmt(have ? summaries[static_cast<std::size_t>(i)].mean_probc1 : kNaN) << '\n';
  }

  auto loadings = open_out(out_dir, "corr_loadings.csv");
  loadings << "feature";
  for (int c = 0; c < pca.component_count; ++c) loadings << ",comp" << (c + 1);
  loadings << ",circle50,circle100\n";
  for (Eigen::Index j = 0; j < pca.correlation_loadings.rows(); ++j) {
    loadings << (j < static_cast<Eigen::Index>(feature_names.size())
                     ? feature_names[static_cast<std::size_t>(j)]
                     : "f" + std::to_string(j));
    for (int c = 0; c < pca.component_count; ++c) loadings << ',' << fmt(pca.correlation_loadings(j, c));
    loadings << ',' << fmt(std::sqrt(0.5)) << ",1\n";
  }
}

}  // namespace rent
