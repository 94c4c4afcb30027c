#include "rent/study.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rent/hyper.hpp"
#include "rent/metrics.hpp"
#include "rent/parallel.hpp"
#include "rent/rng.hpp"
#include "rent/stats.hpp"

namespace rent {

double study_score(const GlmModel& model, const Eigen::MatrixXd& x_test,
                   const Eigen::VectorXd& y_test) {
  if (model.task == Task::Classification)
    return mcc(confusion(y_test, predict_labels(model, x_test), 1));
  return r2(y_test, predict(model, x_test));
}

StudyReport vs1(const Dataset& train, const Dataset& test, int delta, double observed_score,
                int ell, std::uint64_t seed, const ElasticNetConfig& refit_base,
                int n_threads) {
  if (ell < 2) throw std::invalid_argument("vs1: need ell >= 2");
  if (delta < 1 || delta > train.n_features())
    throw std::invalid_argument("vs1: delta out of range");

  std::vector<double> raw(static_cast<std::size_t>(ell),
                          std::numeric_limits<double>::quiet_NaN());
  parallel_for(ell, n_threads, [&](int i) {
    Rng rng(derive_seed(seed, seed_stream::kVs1, static_cast<std::uint64_t>(i)));
    const std::vector<int> subset = rng.sample_without_replacement(train.n_features(), delta);
    try {
      const GlmModel model = refit_unregularized(train, subset, refit_base);
      const Dataset test_sel = apply_selection(test, subset);
      raw[static_cast<std::size_t>(i)] = study_score(model, test_sel.x, test.y);
    } catch (const std::exception&) {
      // refit failure: recorded as NaN and excluded below
    }
  });

  StudyReport report;
  report.study_kind = StudyKind::VS1;
  report.observed_score = observed_score;
  for (double v : raw) {
    if (std::isnan(v))
      ++report.excluded_count;
    else
      report.null_scores.push_back(v);
  }
  if (report.null_scores.size() < 2)
    throw std::runtime_error("vs1: fewer than 2 successful null refits");
  report.p_value = one_sided_t_test(report.null_scores, observed_score);
  return report;
}

StudyReport vs2(const Dataset& train, const Dataset& test, const std::vector<int>& selected,
                int ell, std::uint64_t seed, const ElasticNetConfig& refit_base) {
  if (ell < 2) throw std::invalid_argument("vs2: need ell >= 2");

  const GlmModel model = refit_unregularized(train, selected, refit_base);
  const Dataset test_sel = apply_selection(test, selected);
  const double observed = study_score(model, test_sel.x, test.y);

  StudyReport report;
  report.study_kind = StudyKind::VS2;
  report.observed_score = observed;
  report.null_scores.reserve(static_cast<std::size_t>(ell));

  const auto n_test = static_cast<std::size_t>(test.n_objects());
  for (int i = 0; i < ell; ++i) {
    Rng rng(derive_seed(seed, seed_stream::kVs2, static_cast<std::uint64_t>(i)));
    std::vector<int> perm(n_test);
    for (std::size_t p = 0; p < n_test; ++p) perm[p] = static_cast<int>(p);
    rng.shuffle(perm);
    Eigen::VectorXd y_perm(test.y.size());
    for (std::size_t p = 0; p < n_test; ++p) y_perm(static_cast<Eigen::Index>(p)) = test.y(perm[p]);
    report.null_scores.push_back(study_score(model, test_sel.x, y_perm));
  }
  report.p_value = one_sided_t_test(report.null_scores, observed);
  return report;
}

void to_json(nlohmann::json& j, const StudyReport& r) {
  j = nlohmann::json{
      {"study", r.study_kind == StudyKind::VS1 ? "vs1" : "vs2"},
      {"observed_score", r.observed_score},
      {"null_scores", r.null_scores},
      {"null_mean", sample_mean(r.null_scores)},
      {"p_value", r.p_value},
      {"excluded_count", r.excluded_count},
  };
}

}  // namespace rent
