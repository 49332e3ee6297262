#pragma once

#include <cstdint>

#include "tsc/types.hpp"

namespace tsc {

// Per-entity summary used by the sampler: row i of `means` is the series
// mean b_i, scatter[i] is the mean squared deviation a_i around it, so that
// sq_dist_sum(x_i, mu) / T_i == ||b_i - mu||^2 + a_i for every mu.
struct EntitySummaries {
  Matrix means;         // N x d
  Vector scatter;       // N, nonnegative
  double total_scatter = 0.0;  // sum of scatter
};
EntitySummaries entity_summaries(const TimeSeriesDataset& data);

struct KMeansResult {
  Matrix centers;               // k x d
  std::vector<int> assignment;  // point -> center index
  double cost = 0.0;            // sum of squared distances
};

// k-means++ seeding followed by Lloyd iterations on the rows of `points`.
// Runs `restarts` independent seedings and keeps the best final cost.
// Deterministic given (seed); ties in assignment go to the lowest center
// index; a center losing all points is reseeded at the point with the
// largest current cost contribution.
KMeansResult kmeans(const Matrix& points, int k, int restarts,
                    std::uint64_t seed);

// Optimal 1-means cost of one series around its own mean:
// sq_dist_sum(x, b_i) = T_i * a_i.
double one_means_cost(const EntitySeries& x);

}  // namespace tsc
