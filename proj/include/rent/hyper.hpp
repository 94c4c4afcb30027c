#pragma once

#include <limits>
#include <vector>

#include "rent/dataset.hpp"
#include "rent/ensemble.hpp"
#include "rent/glm.hpp"

namespace rent {

struct EnetGrid {
  std::vector<double> gammas = {0.01, 0.1, 1.0};
  std::vector<double> alphas = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
};

struct CutoffGrid {
  std::vector<double> t1_values;  // default 0.2..1.0, step 0.05
  std::vector<double> t2_values;  // same range
  std::vector<double> t3_values = {0.9, 0.95, 0.975, 0.99};

  CutoffGrid();
};

struct SearchRecord {
  double gamma = 0.0;
  double alpha = 0.0;
  Cutoffs cutoffs;
  double bic_value = std::numeric_limits<double>::quiet_NaN();  // NaN until evaluated
  int n_selected = 0;   // nonzero weights (step 1) or |F*| (step 2)
  bool converged = false;
  bool skipped = false;  // step 2: empty F* or |F*| >= I_train
};

struct EnetSearchResult {
  double gamma = 0.0;
  double alpha = 0.0;
  std::vector<SearchRecord> records;
};

struct CutoffSearchResult {
  Cutoffs cutoffs;
  std::vector<int> selected;  // F* at the winning grid point
  std::vector<SearchRecord> records;
};

// Step 1: one elastic-net GLM per (gamma, alpha) on the full training set,
// ranked by BIC with rho = nonzero count + 1. Ties break toward fewer
// nonzero weights, then larger gamma, then larger alpha. Errors out if no
// grid point converges.
EnetSearchResult search_enet(const Dataset& train, const EnetGrid& grid,
                             const ElasticNetConfig& base, int n_threads = 0);

// Step 2: for each cutoff tuple, derive F* and refit one unregularized GLM on
// the selected columns; rank by BIC with rho = |F*| + 1. Tuples with empty F*
// or |F*| >= I_train are skipped; identical F* sets are evaluated once. Ties
// break toward smaller |F*|, then the lexicographically larger tuple. Errors
// out if every tuple is inadmissible.
CutoffSearchResult search_cutoffs(const EnsembleOutput& ensemble, const Dataset& train,
                                  const CutoffGrid& grid, const ElasticNetConfig& refit_base,
                                  int n_threads = 0);

// The downstream model M*: an unregularized GLM on the selected columns.
GlmModel refit_unregularized(const Dataset& train, const std::vector<int>& selected,
                             const ElasticNetConfig& base);

}  // namespace rent
