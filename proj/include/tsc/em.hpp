#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tsc/types.hpp"

namespace tsc {

struct FitConfig {
  int k = 1;
  int max_iters = 100;
  double tol = 1e-6;     // relative objective improvement threshold
  int n_init = 1;        // independent restarts, best objective wins
  std::uint64_t seed = 0;
  ModelBounds bounds;
  // Fixed-parameter modes used by diagnostics and tests.
  bool update_ar = true;
  bool update_sigma = true;
};

struct FitResult {
  MixtureParams params;
  // Full-data negative log-likelihood of `params` (the model-selection
  // metric, even when fitting used a coreset).
  double objective = 0.0;
  // Accepted internal objective value per iteration, non-increasing.
  std::vector<double> trace;
  int iters = 0;
  double wall_seconds = 0.0;
};

// Data-driven starting point: means from k-means on the entity summary
// means, pooled within-entity covariance (ridged) shared across components,
// AR coefficients zero, uniform mixing.
MixtureParams init_params(const TimeSeriesDataset& data, int k,
                          std::uint64_t seed, const ModelBounds& bounds);

// Weighted generalized EM. `coreset == nullptr` fits the full data, which
// runs the identical code path on the identity coreset. When `init` is set
// it replaces the data-driven initializer and n_init is treated as 1.
// Per-iteration cost is independent of series length after one pass of
// moment accumulation.
FitResult fit(const TimeSeriesDataset& data, const Coreset* coreset,
              const FitConfig& config,
              const std::optional<MixtureParams>& init = std::nullopt);

}  // namespace tsc
