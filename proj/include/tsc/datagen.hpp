#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsc/types.hpp"

namespace tsc {

enum class ErrorInit {
  Stationary,  // first error drawn at the per-dimension stationary variance
  Zero,        // first error drawn from the innovation covariance directly
};

struct GenConfig {
  int n_entities = 0;
  int series_len = 0;  // all entities share one length here
  int d = 1;
  int k = 1;
  double lambda = 0.01;  // AR margin; coefficients drawn in [0, 1-sqrt(lambda)]
  std::uint64_t seed = 0;
  ErrorInit init = ErrorInit::Stationary;
};

struct GroundTruth {
  MixtureParams params;
  std::vector<int> labels;  // component index per entity
};

// Known benchmark shapes: "synthetic1" (500 x 500), "synthetic2"
// (200 x 1250), and the small "desk" shape used by fast checks.
GenConfig preset(const std::string& name);

// Random mixture parameters: mixing uniform on the simplex, means standard
// normal, covariances inverse Gram matrices of uniform draws (redrawn up to
// 100 times if near-singular, then identity), AR coefficients uniform in
// [0, 1-sqrt(lambda)].
MixtureParams draw_params(const GenConfig& config);

// Simulate a dataset from explicit parameters (labels drawn from alpha).
std::pair<TimeSeriesDataset, GroundTruth> generate_from(
    const GenConfig& config, const MixtureParams& params);

// draw_params + generate_from under one seed.
std::pair<TimeSeriesDataset, GroundTruth> generate(const GenConfig& config);

}  // namespace tsc
