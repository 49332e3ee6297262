#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Deterministic random streams. Every stochastic stage draws from its own
// stream keyed by (seed, stage, id), so results do not depend on thread
// count or on how much randomness other stages consumed. Distribution
// sampling is implemented here (instead of <random> distributions) because
// the standard does not pin down distribution algorithms across libraries.
namespace tsc::rng {

enum class Stage : std::uint64_t {
  GenParams = 1,
  GenSeries = 2,
  KMeansSeed = 3,
  EntitySample = 4,
  TimeSample = 5,
  UniformSample = 6,
  PoolKMeans = 7,
  PoolSample = 8,
  FitInit = 9,
  Experiment = 10,
};

std::uint64_t mix(std::uint64_t x);  // splitmix64 finalizer
std::uint64_t derive_key(std::uint64_t seed, Stage stage, std::uint64_t id);

class Stream {
 public:
  explicit Stream(std::uint64_t key);
  Stream(std::uint64_t seed, Stage stage, std::uint64_t id);

  std::uint64_t next_u64();
  double uniform01();                       // [0, 1)
  double uniform(double lo, double hi);     // [lo, hi)
  double normal();                          // standard normal, Box-Muller
  // Index draw with probability proportional to weights[j]; weights must be
  // nonnegative with a positive sum.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tsc::rng
