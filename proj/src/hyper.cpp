#include "rent/hyper.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rent/parallel.hpp"

namespace rent {

CutoffGrid::CutoffGrid() {
  for (int i = 0; i <= 16; ++i) {
    const double t = 0.2 + 0.05 * i;
    t1_values.push_back(t);
    t2_values.push_back(t);
  }
}

EnetSearchResult search_enet(const Dataset& train, const EnetGrid& grid,
                             const ElasticNetConfig& base, int n_threads) {
  if (grid.gammas.empty() || grid.alphas.empty())
    throw std::invalid_argument("search_enet: empty grid");

  const int n_points = static_cast<int>(grid.gammas.size() * grid.alphas.size());
  std::vector<SearchRecord> records(static_cast<std::size_t>(n_points));

  parallel_for(n_points, n_threads, [&](int i) {
    const std::size_t gi = static_cast<std::size_t>(i) / grid.alphas.size();
    const std::size_t ai = static_cast<std::size_t>(i) % grid.alphas.size();
    ElasticNetConfig cfg = base;
    cfg.gamma = grid.gammas[gi];
    cfg.alpha = grid.alphas[ai];
    const GlmModel model = fit_glm_enet(train.x, train.y, train.task, cfg);
    SearchRecord rec;
    rec.gamma = cfg.gamma;
    rec.alpha = cfg.alpha;
    rec.bic_value = bic(model, train.x, train.y);
    rec.n_selected = model.nonzero_count();
    rec.converged = model.converged;
    records[static_cast<std::size_t>(i)] = rec;
  });

  bool any_converged = false;
  for (const auto& r : records) any_converged = any_converged || r.converged;
  if (!any_converged) {
    std::string msg = "search_enet: no grid point converged;";
    for (const auto& r : records)
      msg += " (gamma=" + std::to_string(r.gamma) + ", alpha=" + std::to_string(r.alpha) +
             ", bic=" + std::to_string(r.bic_value) + ")";
    throw std::runtime_error(msg);
  }

  const SearchRecord* best = nullptr;
  for (const auto& r : records) {
    if (best == nullptr) {
      best = &r;
      continue;
    }
    if (r.bic_value < best->bic_value ||
        (r.bic_value == best->bic_value &&
         (r.n_selected < best->n_selected ||
          (r.n_selected == best->n_selected &&
           (r.gamma > best->gamma ||
            (r.gamma == best->gamma && r.alpha > best->alpha))))))
      best = &r;
  }
  return EnetSearchResult{best->gamma, best->alpha, std::move(records)};
}

GlmModel refit_unregularized(const Dataset& train, const std::vector<int>& selected,
                             const ElasticNetConfig& base) {
  const Dataset projected = apply_selection(train, selected);
  ElasticNetConfig cfg = base;
  cfg.gamma = 0.0;
  cfg.alpha = 0.0;
  return fit_glm_enet(projected.x, projected.y, projected.task, cfg);
}

CutoffSearchResult search_cutoffs(const EnsembleOutput& ensemble, const Dataset& train,
                                  const CutoffGrid& grid, const ElasticNetConfig& refit_base,
                                  int n_threads) {
  if (grid.t1_values.empty() || grid.t2_values.empty() || grid.t3_values.empty())
    throw std::invalid_argument("search_cutoffs: empty grid");

  const CriteriaScores scores = score_features(ensemble.weight_matrix);
  const int n_train = train.n_objects();

  struct Entry {
    double bic_value = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
  };
  std::map<std::vector<int>, Entry> memo;  // distinct F* sets, each refit once

  std::vector<SearchRecord> records;
  std::vector<const std::vector<int>*> record_sets;
  for (double t1 : grid.t1_values) {
    for (double t2 : grid.t2_values) {
      for (double t3 : grid.t3_values) {
        const Cutoffs cut{t1, t2, t3};
        SelectionResult sel = select_features(scores, cut);
        SearchRecord rec;
        rec.cutoffs = cut;
        rec.n_selected = sel.delta;
        rec.skipped = sel.delta == 0 || sel.delta >= n_train;
        const std::vector<int>* key = nullptr;
        if (!rec.skipped) key = &memo.emplace(std::move(sel.selected), Entry{}).first->first;
        records.push_back(rec);
        record_sets.push_back(key);
      }
    }
  }

  std::vector<std::pair<const std::vector<int>*, Entry*>> pending;
  pending.reserve(memo.size());
  for (auto& [key, entry] : memo) pending.emplace_back(&key, &entry);
  parallel_for(static_cast<int>(pending.size()), n_threads, [&](int i) {
    const GlmModel model = refit_unregularized(train, *pending[static_cast<std::size_t>(i)].first, refit_base);
    const Dataset projected = apply_selection(train, *pending[static_cast<std::size_t>(i)].first);
    pending[static_cast<std::size_t>(i)].second->bic_value = bic(model, projected.x, projected.y);
    pending[static_cast<std::size_t>(i)].second->converged = model.converged;
  });

  const SearchRecord* best = nullptr;
  const std::vector<int>* best_set = nullptr;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    if (rec.skipped) continue;
    const Entry& e = memo.at(*record_sets[i]);
    rec.bic_value = e.bic_value;
    rec.converged = e.converged;
    const auto tuple_of = [](const SearchRecord& r) {
      return std::array<double, 3>{r.cutoffs.t1, r.cutoffs.t2, r.cutoffs.t3};
    };
    if (best == nullptr || rec.bic_value < best->bic_value ||
        (rec.bic_value == best->bic_value &&
         (rec.n_selected < best->n_selected ||
          (rec.n_selected == best->n_selected && tuple_of(rec) > tuple_of(*best))))) {
      best = &rec;
      best_set = record_sets[i];
    }
  }
  if (best == nullptr)
    throw std::runtime_error("search_cutoffs: no admissible cutoff configuration");

  return CutoffSearchResult{best->cutoffs, *best_set, std::move(records)};
}

}  // namespace rent
