#include "tsc/coreset.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsc/rng.hpp"
#include "tsc/threading.hpp"

namespace tsc {

EntityScores entity_scores(const TimeSeriesDataset& data, int k,
                           const ModelBounds& bounds, std::uint64_t seed,
                           int restarts) {
  data.validate();
  bounds.validate();
  EntityScores out;
  out.summaries = entity_summaries(data);
  out.clustering = kmeans(out.summaries.means, k, restarts, seed);

  const int n = data.num_entities();
  std::vector<std::int64_t> cluster_size(static_cast<std::size_t>(k), 0);
  for (int l : out.clustering.assignment) ++cluster_size[static_cast<std::size_t>(l)];

  const double denom = out.clustering.cost + out.summaries.total_scatter;
  out.s.resize(n);
  out.s_cluster.resize(n);
  for (int i = 0; i < n; ++i) {
    const int l = out.clustering.assignment[static_cast<std::size_t>(i)];
    out.s_cluster[i] = 1.0 / static_cast<double>(cluster_size[static_cast<std::size_t>(l)]);
    double dist_term = 0.0;
    if (denom > 0.0) {
      const double d2 =
          (out.summaries.means.row(i) - out.clustering.centers.row(l)).squaredNorm();
      dist_term = 4.0 * d2 / denom;
    }
    out.s[i] = std::min(
        1.0, 4.0 * bounds.d_ratio * (dist_term + 3.0 * out.s_cluster[i]) / bounds.lambda);
  }
  out.total = out.s.sum();
  return out;
}

TimeScores time_scores(const EntitySeries& x, const Vector& mean,
                       const ModelBounds& bounds) {
  const int T = x.length();
  TimeScores out;
  out.s.resize(T);
  out.s_cluster.resize(T);
  Vector d2(T);
  for (int t = 1; t <= T; ++t) d2[t - 1] = (x.at(t) - mean).squaredNorm();
  out.one_means = d2.sum();
  for (int t = 0; t < T; ++t) {
    const double dist_term = out.one_means > 0.0 ? 2.0 * d2[t] / out.one_means : 0.0;
    out.s_cluster[t] = dist_term + 6.0 / static_cast<double>(T);
  }
  const double scale = 4.0 * bounds.d_ratio / bounds.lambda;
  for (int t = 0; t < T; ++t) {
    const double shift = t >= 1 ? out.s_cluster[t - 1] : 0.0;
    out.s[t] = std::min(1.0, scale * (out.s_cluster[t] + shift));
  }
  out.total = out.s.sum();
  return out;
}

WeightedSample sample_weighted(const Vector& scores, int draws,
                               std::uint64_t key) {
  if (draws < 1) throw std::invalid_argument("sample draws must be >= 1");
  rng::Stream stream(key);
  std::vector<double> w(scores.data(), scores.data() + scores.size());
  const double total = scores.sum();
  std::map<int, std::int64_t> counts;
  for (int g = 0; g < draws; ++g) {
    ++counts[static_cast<int>(stream.categorical(w))];
  }
  WeightedSample out;
  out.kept.reserve(counts.size());
  for (const auto& [idx, cnt] : counts) {
    out.kept.push_back(idx);
    out.weights[idx] = static_cast<double>(cnt) * total /
                       (static_cast<double>(draws) * scores[idx]);
  }
  return out;
}

CoresetBuild build_coreset(const TimeSeriesDataset& data,
                           const SamplerConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  config.bounds.validate();
  if (config.k < 1 || config.k > data.num_entities()) {
    throw std::invalid_argument("sampler k must lie in [1, N]");
  }

  CoresetBuild out;
  out.scores = entity_scores(data, config.k, config.bounds, config.seed,
                             config.restarts);

  if (config.full_coverage) {
    out.coreset = identity_coreset(data);
    out.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }
  if (config.m_entities < 1 || config.l_times < 1) {
    throw std::invalid_argument("sample sizes must be >= 1");
  }

  const WeightedSample entities =
      sample_weighted(out.scores.s, config.m_entities,
                      rng::derive_key(config.seed, rng::Stage::EntitySample, 0));

  Coreset& s = out.coreset;
  s.entity_ids = entities.kept;
  for (int id : entities.kept) s.entity_weights[id] = entities.weights.at(id);

  // Per-entity time stage; streams keyed by entity id, so the outcome does
  // not depend on processing order.
  std::vector<TimeScores> ts(entities.kept.size());
  std::vector<WeightedSample> picks(entities.kept.size());
  parallel_for(entities.kept.size(), [&](std::size_t j) {
    const int id = entities.kept[j];
    const EntitySeries& x = data.entities[id];
    ts[j] = time_scores(
        x, out.scores.summaries.means.row(id).transpose(), config.bounds);
    picks[j] = sample_weighted(
        ts[j].s, config.l_times,
        rng::derive_key(config.seed, rng::Stage::TimeSample,
                        static_cast<std::uint64_t>(id)));
  });
  for (std::size_t j = 0; j < entities.kept.size(); ++j) {
    const int id = entities.kept[j];
    out.kept_time_scores[id] = ts[j];
    auto& steps = s.time_indices[id];
    auto& tw = s.time_weights[id];
    steps.reserve(picks[j].kept.size());
    for (int idx : picks[j].kept) {
      steps.push_back(idx + 1);  // to 1-based time
      tw[idx + 1] = picks[j].weights.at(idx);
    }
  }
  out.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

TheoreticalSizes theoretical_sizes(double eps, int k, int d,
                                   const ModelBounds& bounds, double c_entity,
                                   double c_time) {
  bounds.validate();
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  if (!(c_entity > 0.0) || !(c_time > 0.0)) {
    throw std::invalid_argument("leading constants must be positive");
  }
  if (k < 1 || d < 1) throw std::invalid_argument("k and d must be >= 1");

  const double D = bounds.d_ratio;
  const double lam = bounds.lambda;
  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(d);
  const double poly =
      std::pow(kd, 4) * std::pow(dd, 4) + std::pow(kd, 3) * std::pow(dd, 8);
  const double m =
      std::ceil(c_entity * kd * D * poly * std::log(kd / lam) / (lam * eps * eps));
  const double l =
      std::ceil(c_time * D * std::pow(dd, 8) * std::log(1.0 / lam) / (lam * eps * eps));
  if (!(m < 9.0e18) || !(l < 9.0e18)) {
    throw std::range_error("theoretical size overflows 64 bits");
  }
  return {static_cast<long long>(m), static_cast<long long>(l)};
}

namespace {

// Flat (entity, 1-based time) pair table for the pooled/uniform views.
struct PairTable {
  std::vector<int> entity;
  std::vector<int> time;
};

PairTable flatten(const TimeSeriesDataset& data) {
  PairTable pt;
  const std::int64_t total = data.total_observations();
  pt.entity.reserve(static_cast<std::size_t>(total));
  pt.time.reserve(static_cast<std::size_t>(total));
  for (const auto& e : data.entities) {
    for (int t = 1; t <= e.length(); ++t) {
      pt.entity.push_back(e.id);
      pt.time.push_back(t);
    }
  }
  return pt;
}

}  // namespace

Coreset uniform_baseline(const TimeSeriesDataset& data, std::int64_t gamma,
                         std::uint64_t seed) {
  data.validate();
  if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
  const PairTable pt = flatten(data);
  const auto total = static_cast<double>(pt.entity.size());
  rng::Stream stream(seed, rng::Stage::UniformSample, 0);

  std::map<int, std::map<int, std::int64_t>> picked;  // id -> t -> count
  for (std::int64_t g = 0; g < gamma; ++g) {
    auto flat = static_cast<std::size_t>(stream.uniform01() * total);
    if (flat >= pt.entity.size()) flat = pt.entity.size() - 1;
    ++picked[pt.entity[flat]][pt.time[flat]];
  }

  Coreset s;
  const double n = static_cast<double>(data.num_entities());
  for (const auto& [id, steps] : picked) {
    s.entity_ids.push_back(id);
    s.entity_weights[id] = n / static_cast<double>(picked.size());
    const double len = static_cast<double>(data.entities[id].length());
    auto& ti = s.time_indices[id];
    auto& tw = s.time_weights[id];
    for (const auto& [t, cnt] : steps) {
      ti.push_back(t);
      tw[t] = len / static_cast<double>(steps.size());
    }
  }
  return s;
}

Coreset pooled_baseline(const TimeSeriesDataset& data, std::int64_t gamma,
                        int k, std::uint64_t seed) {
  data.validate();
  if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
  const PairTable pt = flatten(data);
  const auto P = static_cast<Eigen::Index>(pt.entity.size());
  Matrix points(P, data.dim());
  for (Eigen::Index p = 0; p < P; ++p) {
    points.row(p) = data.entities[pt.entity[static_cast<std::size_t>(p)]]
                        .observations.row(pt.time[static_cast<std::size_t>(p)] - 1);
  }
  if (k > P) throw std::invalid_argument("k exceeds pooled point count");

  const KMeansResult km =
      kmeans(points, k, 1, rng::derive_key(seed, rng::Stage::PoolKMeans, 0));
  std::vector<std::int64_t> cluster_size(static_cast<std::size_t>(k), 0);
  for (int l : km.assignment) ++cluster_size[static_cast<std::size_t>(l)];

  Vector scores(P);
  for (Eigen::Index p = 0; p < P; ++p) {
    const int l = km.assignment[static_cast<std::size_t>(p)];
    double dist_term = 0.0;
    if (km.cost > 0.0) {
      dist_term = 4.0 * (points.row(p) - km.centers.row(l)).squaredNorm() / km.cost;
    }
    scores[p] =
        dist_term + 3.0 / static_cast<double>(cluster_size[static_cast<std::size_t>(l)]);
  }

  rng::Stream stream(seed, rng::Stage::PoolSample, 0);
  std::vector<double> w(scores.data(), scores.data() + scores.size());
  const double total = scores.sum();
  std::map<std::size_t, std::int64_t> counts;
  for (std::int64_t g = 0; g < gamma; ++g) ++counts[stream.categorical(w)];

  // Merged per-pair importance weights, grouped by entity.
  std::map<int, std::map<int, double>> pair_weight;
  std::map<int, std::vector<int>> pair_steps;
  for (const auto& [p, cnt] : counts) {
    const int id = pt.entity[p];
    const int t = pt.time[p];
    pair_weight[id][t] = static_cast<double>(cnt) * total /
                         (static_cast<double>(gamma) * scores[static_cast<Eigen::Index>(p)]);
    pair_steps[id].push_back(t);
  }

  Coreset s;
  const double n = static_cast<double>(data.num_entities());
  const double kept_entities = static_cast<double>(pair_weight.size());
  for (auto& [id, steps] : pair_steps) {
    s.entity_ids.push_back(id);
    const double wi = n / kept_entities;
    s.entity_weights[id] = wi;
    const double len = static_cast<double>(data.entities[id].length());
    auto& ti = s.time_indices[id];
    auto& tw = s.time_weights[id];
    for (int t : steps) {
      ti.push_back(t);
      tw[t] = pair_weight[id][t] * len / (n * wi);
    }
  }
  return s;
}

}  // namespace tsc
