#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "tsc/coreset.hpp"
#include "tsc/model.hpp"
#include "tsc/rng.hpp"

using namespace tsc;

namespace {

EntitySeries make_series(int id, const Matrix& obs) {
  EntitySeries e;
  e.id = id;
  e.observations = obs;
  return e;
}

TimeSeriesDataset random_dataset(rng::Stream& s, int n, int t_max, int d) {
  TimeSeriesDataset data;
  for (int i = 0; i < n; ++i) {
    const int t = 2 + static_cast<int>(s.uniform01() * (t_max - 1));
    Matrix obs(t, d);
    for (Eigen::Index r = 0; r < obs.rows(); ++r) {
      for (Eigen::Index c = 0; c < obs.cols(); ++c) {
        obs(r, c) = 4.0 * s.normal() + s.uniform(-2.0, 2.0);
      }
    }
    data.entities.push_back(make_series(i, obs));
  }
  return data;
}

ModelBounds bounds(double d_ratio, double lambda) {
  ModelBounds b;
  b.d_ratio = d_ratio;
  b.lambda = lambda;
  return b;
}

}  // namespace

TEST_SUITE("coreset") {

TEST_CASE("interchangeable entities all get the saturated score") {
  // Twelve identical constant series: no spread, equal cluster shares, so
  // each score hits its cap of one.
  TimeSeriesDataset data;
  for (int i = 0; i < 12; ++i) {
    data.entities.push_back(make_series(i, Matrix::Ones(3, 1)));
  }
  const EntityScores es = entity_scores(data, 1, bounds(1.0, 0.25), 3);
  for (int i = 0; i < 12; ++i) {
    CHECK(es.s_cluster[i] == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(es.s[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(es.total == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("cluster shares sum to the number of occupied clusters") {
  rng::Stream s(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(s.uniform01() * 25);
    const int k = 1 + static_cast<int>(s.uniform01() * 3);
    if (k > n) continue;
    const TimeSeriesDataset data = random_dataset(s, n, 10, 2);
    const EntityScores es = entity_scores(data, k, bounds(1.5, 0.1), trial);
    CHECK(es.s_cluster.sum() <= k + 1e-9);
    CHECK(es.s.maxCoeff() <= 1.0 + 1e-12);
    CHECK(es.s.minCoeff() > 0.0);
  }
}

TEST_CASE("entity score mass respects the closed-form budget") {
  rng::Stream s(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(s.uniform01() * 20);
    const int k = 1 + static_cast<int>(s.uniform01() * 3);
    const double D = 1.0 + s.uniform01() * 3.0;
    const double lam = 0.05 + s.uniform01() * 0.9;
    const TimeSeriesDataset data = random_dataset(s, n, 8, 1);
    const EntityScores es = entity_scores(data, k, bounds(D, lam), trial);
    CHECK(es.total <= (16.0 * D + 12.0 * D * k) / lam + 1e-6);
  }
}

TEST_CASE("time scores on a constant series are uniform and saturated") {
  Matrix obs = Matrix::Constant(3, 1, 5.0);
  const EntitySeries x = make_series(0, obs);
  const TimeScores ts =
      time_scores(x, Vector::Constant(1, 5.0), bounds(1.0, 0.25));
  for (int t = 0; t < 3; ++t) {
    CHECK(ts.s_cluster[t] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ts.s[t] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(ts.one_means == doctest::Approx(0.0));
}

TEST_CASE("time share mass is eight whenever the series has spread") {
  rng::Stream s(23);
  for (int trial = 0; trial < 25; ++trial) {
    const int t = 2 + static_cast<int>(s.uniform01() * 30);
    const int d = 1 + static_cast<int>(s.uniform01() * 3);
    Matrix obs(t, d);
    for (Eigen::Index r = 0; r < obs.rows(); ++r) {
      for (Eigen::Index c = 0; c < obs.cols(); ++c) obs(r, c) = s.normal();
    }
    const EntitySeries x = make_series(0, obs);
    Vector mean = Vector::Zero(d);
    for (int u = 1; u <= t; ++u) mean += x.at(u);
    mean /= t;
    const TimeScores ts = time_scores(x, mean, bounds(1.0, 0.5));
    CHECK(ts.s_cluster.sum() == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(ts.s.sum() <= 64.0 * 1.0 / 0.5 + 1e-6);
  }
}

TEST_CASE("time score mass respects its budget for varied bounds") {
  rng::Stream s(24);
  for (int trial = 0; trial < 20; ++trial) {
    const int t = 2 + static_cast<int>(s.uniform01() * 40);
    Matrix obs(t, 2);
    for (Eigen::Index r = 0; r < obs.rows(); ++r) {
      obs(r, 0) = 3.0 * s.normal();
      obs(r, 1) = s.uniform(-5.0, 5.0);
    }
    const EntitySeries x = make_series(0, obs);
    const double D = 1.0 + s.uniform01() * 4.0;
    const double lam = 0.05 + s.uniform01() * 0.9;
    Vector mean = Vector::Zero(2);
    for (int u = 1; u <= t; ++u) mean += x.at(u);
    mean /= t;
    const TimeScores ts = time_scores(x, mean, bounds(D, lam));
    CHECK(ts.s.sum() <= 64.0 * D / lam + 1e-6);
    CHECK(ts.s.maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("merged importance weights keep equal-score draws calibrated") {
  // With equal scores every index has weight total / (draws * score) per
  // draw, so the merged weights sum back to the population size.
  const Vector scores = Vector::Constant(4, 1.0);
  const WeightedSample ws = sample_weighted(scores, 8, 42);
  double sum = 0.0;
  for (const auto& [idx, w] : ws.weights) {
    CHECK(idx >= 0);
    CHECK(idx < 4);
    sum += w;
  }
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("a single candidate always gets weight one") {
  const Vector scores = Vector::Constant(1, 0.7);
  const WeightedSample ws = sample_weighted(scores, 3, 9);
  REQUIRE(ws.kept.size() == 1);
  CHECK(ws.weights.at(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic in the key and rejects bad draw counts") {
  Vector scores(3);
  scores << 0.2, 0.5, 1.0;
  const WeightedSample a = sample_weighted(scores, 6, 7);
  const WeightedSample b = sample_weighted(scores, 6, 7);
  CHECK(a.kept == b.kept);
  CHECK(a.weights == b.weights);
  CHECK_THROWS_AS(sample_weighted(scores, 0, 7), std::invalid_argument);
}

TEST_CASE("expected merged weight is unbiased for the population total") {
  // sum_i w(i) 1[i kept] has expectation N for any score vector; check the
  // empirical mean over many keys.
  Vector scores(3);
  scores << 0.1, 0.6, 1.0;
  double acc = 0.0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    const WeightedSample ws = sample_weighted(scores, 2, 10000 + r);
    for (const auto& [idx, w] : ws.weights) acc += w;
  }
  CHECK(acc / reps == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("two-stage build returns a valid weighted subsample") {
  rng::Stream s(25);
  const TimeSeriesDataset data = random_dataset(s, 12, 9, 2);
  SamplerConfig cfg;
  cfg.m_entities = 5;
  cfg.l_times = 3;
  cfg.k = 2;
  cfg.seed = 77;
  cfg.bounds = bounds(1.0, 0.25);
  const CoresetBuild built = build_coreset(data, cfg);
  CHECK_NOTHROW(built.coreset.validate(data));
  CHECK(static_cast<int>(built.coreset.entity_ids.size()) <= 5);
  for (int id : built.coreset.entity_ids) {
    const auto& steps = built.coreset.time_indices.at(id);
    CHECK(static_cast<int>(steps.size()) <= 3);
    CHECK(!steps.empty());
    for (std::size_t j = 1; j < steps.size(); ++j) {
      CHECK(steps[j - 1] < steps[j]);
    }
    CHECK(built.coreset.entity_weights.at(id) > 0.0);
  }
  CHECK(built.kept_time_scores.size() == built.coreset.entity_ids.size());

  const CoresetBuild again = build_coreset(data, cfg);
  CHECK(again.coreset.entity_ids == built.coreset.entity_ids);
  CHECK(again.coreset.entity_weights == built.coreset.entity_weights);
  CHECK(again.coreset.time_indices == built.coreset.time_indices);
}

TEST_CASE("full coverage bypasses sampling entirely") {
  rng::Stream s(26);
  const TimeSeriesDataset data = random_dataset(s, 5, 6, 1);
  SamplerConfig cfg;
  cfg.full_coverage = true;
  cfg.k = 1;
  cfg.bounds = bounds(1.0, 0.25);
  const CoresetBuild built = build_coreset(data, cfg);
  CHECK(built.coreset.pair_count() == data.total_observations());
  const MixtureParams p = [&] {
    MixtureParams q;
    q.alpha = Vector::Ones(1);
    q.components.emplace_back(Vector::Zero(1), Matrix::Identity(1, 1),
                              Vector::Zero(1));
    return q;
  }();
  CHECK(coreset_kernel_nll(data, built.coreset, p) ==
        doctest::Approx(kernel_nll(data, p)).epsilon(1e-12));
}

TEST_CASE("build rejects degenerate sizes and cluster counts") {
  rng::Stream s(27);
  const TimeSeriesDataset data = random_dataset(s, 4, 5, 1);
  SamplerConfig cfg;
  cfg.m_entities = 0;
  cfg.l_times = 2;
  cfg.k = 1;
  cfg.bounds = bounds(1.0, 0.25);
  CHECK_THROWS_AS(build_coreset(data, cfg), std::invalid_argument);
  cfg.m_entities = 2;
  cfg.l_times = 0;
  CHECK_THROWS_AS(build_coreset(data, cfg), std::invalid_argument);
  cfg.l_times = 2;
  cfg.k = 5;  // more clusters than entities
  CHECK_THROWS_AS(build_coreset(data, cfg), std::invalid_argument);
}

TEST_CASE("closed-form sample sizes match a hand-computed point") {
  // k = d = D = 1 and lambda = 1/e make every factor collapse:
  //   entity stage: ceil(2 e) = 6, time stage: ceil(e) = 3.
  const TheoreticalSizes ts =
      theoretical_sizes(1.0, 1, 1, bounds(1.0, std::exp(-1.0)));
  CHECK(ts.m_entities == 6);
  CHECK(ts.l_times == 3);
}

TEST_CASE("sample sizes grow as epsilon shrinks") {
  const ModelBounds b = bounds(2.0, 0.25);
  const TheoreticalSizes loose = theoretical_sizes(1.0, 3, 2, b);
  const TheoreticalSizes tight = theoretical_sizes(0.5, 3, 2, b);
  CHECK(tight.m_entities >= 4 * loose.m_entities - 4);
  CHECK(tight.l_times >= 4 * loose.l_times - 4);
  CHECK(loose.m_entities > 0);
  CHECK(loose.l_times > 0);
}

TEST_CASE("size formula rejects bad arguments") {
  const ModelBounds b = bounds(1.0, 0.25);
  CHECK_THROWS_AS(theoretical_sizes(0.0, 1, 1, b), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_sizes(1.5, 1, 1, b), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_sizes(0.5, 0, 1, b), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_sizes(0.5, 1, 0, b), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_sizes(0.5, 1, 1, b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_sizes(0.5, 1, 1, b, 1.0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("uniform pairs carry coverage-ratio weights") {
  rng::Stream s(28);
  const TimeSeriesDataset data = random_dataset(s, 8, 7, 1);
  const Coreset c = uniform_baseline(data, 20, 5);
  CHECK_NOTHROW(c.validate(data));
  CHECK(c.pair_count() <= 20);
  const double n = static_cast<double>(data.num_entities());
  const double kept = static_cast<double>(c.entity_ids.size());
  for (int id : c.entity_ids) {
    CHECK(c.entity_weights.at(id) ==
          doctest::Approx(n / kept).epsilon(1e-12));
    const double len = static_cast<double>(data.entities[id].length());
    const double steps = static_cast<double>(c.time_indices.at(id).size());
    for (int t : c.time_indices.at(id)) {
      CHECK(c.time_weights.at(id).at(t) ==
            doctest::Approx(len / steps).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(uniform_baseline(data, 0, 5), std::invalid_argument);
}

TEST_CASE("pooled construction emits a valid two-level subsample") {
  rng::Stream s(29);
  const TimeSeriesDataset data = random_dataset(s, 8, 7, 2);
  const Coreset c = pooled_baseline(data, 25, 2, 6);
  CHECK_NOTHROW(c.validate(data));
  CHECK(c.pair_count() <= 25);
  CHECK(c.pair_count() >= 1);
  const double n = static_cast<double>(data.num_entities());
  const double kept = static_cast<double>(c.entity_ids.size());
  for (int id : c.entity_ids) {
    CHECK(c.entity_weights.at(id) ==
          doctest::Approx(n / kept).epsilon(1e-12));
    for (int t : c.time_indices.at(id)) {
      CHECK(c.time_weights.at(id).at(t) > 0.0);
    }
  }
  const Coreset again = pooled_baseline(data, 25, 2, 6);
  CHECK(again.entity_ids == c.entity_ids);
  CHECK(again.time_indices == c.time_indices);
}

TEST_CASE("pooled point scores stay within their closed-form budget") {
  // Reconstruct the flat-point scores the pooled construction samples from
  // and check the total against 4 + 3k.
  rng::Stream s(30);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 1 + static_cast<int>(s.uniform01() * 3);
    const TimeSeriesDataset data = random_dataset(s, 6, 6, 1);
    std::vector<double> flat;
    Eigen::Index total = 0;
    for (const auto& e : data.entities) total += e.observations.rows();
    Matrix points(total, 1);
    Eigen::Index row = 0;
    for (const auto& e : data.entities) {
      for (Eigen::Index t = 0; t < e.observations.rows(); ++t) {
        points(row++, 0) = e.observations(t, 0);
      }
    }
    const KMeansResult km = kmeans(points, k, 1, trial);
    std::vector<int> csize(static_cast<std::size_t>(k), 0);
    for (int l : km.assignment) ++csize[static_cast<std::size_t>(l)];
    double sum = 0.0;
    for (Eigen::Index p = 0; p < total; ++p) {
      const int l = km.assignment[static_cast<std::size_t>(p)];
      double sc = 3.0 / csize[static_cast<std::size_t>(l)];
      if (km.cost > 0.0) {
        sc += 4.0 * (points.row(p) - km.centers.row(l)).squaredNorm() / km.cost;
      }
      sum += sc;
    }
    CHECK(sum <= 4.0 + 3.0 * k + 1e-6);
  }
}

}  // TEST_SUITE
