#pragma once

#include <cstdint>
#include <utility>

#include "tsc/kmeans.hpp"
#include "tsc/types.hpp"

namespace tsc {

struct SamplerConfig {
  int m_entities = 0;   // entity draws (M)
  int l_times = 0;      // per-entity time draws (L)
  int k = 1;            // mixture size the coreset should support
  int restarts = 3;     // k-means restarts inside the sensitivity pass
  std::uint64_t seed = 0;
  ModelBounds bounds;
  // When true, skip sampling and return the identity coreset (exact, no
  // approximation); m_entities / l_times are ignored.
  bool full_coverage = false;
};

// Entity-level sensitivity pass: summarize each series to (b_i, a_i), solve
// k-means on the b_i, and convert distances + cluster shares into sampling
// scores s(i) scaled by the model bounds.
struct EntityScores {
  Vector s;           // N, each in (0, 1]
  Vector s_cluster;   // N, 1/|cluster(i)| shares; sums to #nonempty <= k
  double total = 0.0; // sum of s
  KMeansResult clustering;
  EntitySummaries summaries;
};
EntityScores entity_scores(const TimeSeriesDataset& data, int k,
                           const ModelBounds& bounds, std::uint64_t seed,
                           int restarts = 3);

// Time-level scores within one series around its own mean b_i. A step's
// score also absorbs its predecessor's share so AR(1) terms that straddle
// two steps stay covered.
struct TimeScores {
  Vector s;          // T_i, each in (0, 1]
  Vector s_cluster;  // T_i, distance + uniform shares before the AR fold
  double total = 0.0;
  double one_means = 0.0;  // sum of squared distances to `mean`
};
TimeScores time_scores(const EntitySeries& x, const Vector& mean,
                       const ModelBounds& bounds);

// M / L categorical draws with replacement, duplicates merged by summing
// their importance weights total/(draws * score).
struct WeightedSample {
  std::vector<int> kept;          // unique drawn indices, ascending
  std::map<int, double> weights;  // index -> merged weight
};
WeightedSample sample_weighted(const Vector& scores, int draws,
                               std::uint64_t key);

struct CoresetBuild {
  Coreset coreset;
  EntityScores scores;
  std::map<int, TimeScores> kept_time_scores;  // per kept entity
  double build_seconds = 0.0;
};

// Full two-stage construction (entity stage, then per-kept-entity time
// stage). Time indices in the result are 1-based.
CoresetBuild build_coreset(const TimeSeriesDataset& data,
                           const SamplerConfig& config);

// Sample sizes sufficient for a (1 +/- eps) guarantee according to the
// analysis, with adjustable leading constants. eps in (0, 1].
struct TheoreticalSizes {
  long long m_entities = 0;
  long long l_times = 0;
};
TheoreticalSizes theoretical_sizes(double eps, int k, int d,
                                   const ModelBounds& bounds,
                                   double c_entity = 1.0, double c_time = 1.0);

// Baselines, both matched to a total budget of `gamma` (entity, time) pairs.
// Uniform: gamma pairs drawn uniformly from all (i, t); weights are the
// coverage ratios N/|kept entities| and T_i/|kept steps of i|.
Coreset uniform_baseline(const TimeSeriesDataset& data, std::int64_t gamma,
                         std::uint64_t seed);
// Pooled static-point construction: k-means over all observations pooled
// across entities, per-point sensitivity sampling of gamma pairs, then
// conversion of the flat point weights into the two-level weight layout.
Coreset pooled_baseline(const TimeSeriesDataset& data, std::int64_t gamma,
                        int k, std::uint64_t seed);

}  // namespace tsc
