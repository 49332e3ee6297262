#include "tsc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tsc::rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, Stage stage, std::uint64_t id) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(stage));
  h = mix(h ^ id);
  return h;
}

Stream::Stream(std::uint64_t key) : eng_(key) {}

Stream::Stream(std::uint64_t seed, Stage stage, std::uint64_t id)
    : eng_(derive_key(seed, stage, id)) {}

std::uint64_t Stream::next_u64() { return eng_(); }

double Stream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u clamped away from 0 so the log stays finite.
  double u = uniform01();
  if (u <= 0.0) u = 0x1.0p-53;
  double v = uniform01();
  double r = std::sqrt(-2.0 * std::log(u));
  double a = 2.0 * M_PI * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::size_t Stream::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("negative categorical weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("categorical weights sum to zero");
  double u = uniform01() * total;
  double acc = 0.0;
  std::size_t last = weights.size() - 1;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    acc += weights[j];
    if (u < acc && weights[j] > 0.0) return j;
    if (weights[j] > 0.0) last = j;
  }
  return last;  // u landed on the rounding edge; return last positive index
}

}  // namespace tsc::rng
