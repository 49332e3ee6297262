#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsc/datagen.hpp"
#include "tsc/em.hpp"
#include "tsc/types.hpp"

namespace tsc {

// Twice the gap between the coreset-fit and full-fit objectives, both
// evaluated as full-data NLL.
double likelihood_ratio_stat(double v_full, double v_coreset);

// Permutation of fitted components best matching reference means (summed
// squared mean distance, exhaustive over permutations; k <= 8).
std::vector<int> align_components(const MixtureParams& fitted,
                                  const MixtureParams& reference);
// Max over aligned pairs of ||mu_fit - mu_ref||_2.
double aligned_mean_error(const MixtureParams& fitted,
                          const MixtureParams& reference);

struct ExperimentPoint {
  double epsilon = 0.0;  // label only; sizes below are what is used
  int m_entities = 0;
  int l_times = 0;
};

struct RepRecord {
  std::string method;  // "crgmm", "uniform", "pooled"
  double epsilon = 0.0;
  int rep = 0;
  std::int64_t size = 0;       // coreset (entity, time) pair count
  double v_coreset = 0.0;      // full-data NLL of the coreset fit
  double gamma = 0.0;          // likelihood_ratio_stat vs the full fit
  double build_seconds = 0.0;
  double fit_seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct AggregateRecord {
  std::string method;
  double epsilon = 0.0;
  int reps_used = 0;
  double size_mean = 0.0;
  double v_mean = 0.0;
  double gamma_mean = 0.0;
  double gamma_std = 0.0;  // n-1 denominator; 0 when fewer than 2 reps
  double build_seconds_mean = 0.0;
  double fit_seconds_mean = 0.0;
};

struct ExperimentReport {
  GenConfig gen;
  FitConfig fit;
  std::vector<std::string> methods;
  double v_full = 0.0;         // full-data fit objective
  double full_fit_seconds = 0.0;
  std::vector<RepRecord> reps;
  std::vector<AggregateRecord> aggregates;
  int failures = 0;
};

// Full benchmark pass over one generated dataset: fit the full data once,
// then for each (point, rep, method) build the coreset (baseline budgets
// matched to the realized two-stage pair count of the same rep), fit on it,
// and evaluate on the full data. A failed rep is recorded and excluded from
// aggregates.
ExperimentReport run_experiment(const GenConfig& gen,
                                const std::vector<ExperimentPoint>& points,
                                int reps, const FitConfig& fit,
                                const std::vector<std::string>& methods,
                                std::uint64_t seed);

}  // namespace tsc
