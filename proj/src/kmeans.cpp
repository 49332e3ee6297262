#include "tsc/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tsc/rng.hpp"
#include "tsc/threading.hpp"

namespace tsc {

EntitySummaries entity_summaries(const TimeSeriesDataset& data) {
  const int n = data.num_entities();
  const int d = data.dim();
  EntitySummaries out;
  out.means.resize(n, d);
  out.scatter.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const Matrix& obs = data.entities[i].observations;
    const double T = static_cast<double>(obs.rows());
    const Eigen::RowVectorXd sum = obs.colwise().sum();
    out.means.row(static_cast<Eigen::Index>(i)) = sum / T;
    double a = obs.squaredNorm() / T - sum.squaredNorm() / (T * T);
    out.scatter[static_cast<Eigen::Index>(i)] = std::max(0.0, a);
  });
  out.total_scatter = out.scatter.sum();
  return out;
}

namespace {

struct AssignOut {
  std::vector<int> assignment;
  Vector dist2;
  double cost = 0.0;
};

AssignOut assign_points(const Matrix& points, const Matrix& centers) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centers.rows();
  AssignOut out;
  out.assignment.assign(static_cast<std::size_t>(n), 0);
  out.dist2.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double bestd = (points.row(i) - centers.row(0)).squaredNorm();
    for (Eigen::Index l = 1; l < k; ++l) {
      const double dd = (points.row(i) - centers.row(l)).squaredNorm();
      if (dd < bestd) {
        bestd = dd;
        best = static_cast<int>(l);
      }
    }
    out.assignment[static_cast<std::size_t>(i)] = best;
    out.dist2[i] = bestd;
  }
  out.cost = out.dist2.sum();
  return out;
}

Matrix seed_plus_plus(const Matrix& points, int k, rng::Stream& stream) {
  const Eigen::Index n = points.rows();
  Matrix centers(k, points.cols());
  const auto first = static_cast<Eigen::Index>(stream.uniform01() * n) % n;
  centers.row(0) = points.row(first);
  Vector dist2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist2[i] = (points.row(i) - centers.row(0)).squaredNorm();
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int l = 1; l < k; ++l) {
    Eigen::Index pick;
    if (dist2.sum() > 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = dist2[i];
      pick = static_cast<Eigen::Index>(stream.categorical(w));
    } else {
      pick = static_cast<Eigen::Index>(stream.uniform01() * n) % n;
    }
    centers.row(l) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], (points.row(i) - centers.row(l)).squaredNorm());
    }
  }
  return centers;
}

KMeansResult lloyd(const Matrix& points, Matrix centers) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centers.rows();
  AssignOut cur = assign_points(points, centers);
  double prev_cost = cur.cost;
  for (int iter = 0; iter < 100; ++iter) {
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = cur.assignment[static_cast<std::size_t>(i)];
      sums.row(l) += points.row(i);
      ++counts[static_cast<std::size_t>(l)];
    }
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (Eigen::Index l = 0; l < k; ++l) {
      if (counts[static_cast<std::size_t>(l)] > 0) {
        centers.row(l) = sums.row(l) / static_cast<double>(counts[static_cast<std::size_t>(l)]);
      } else {
        // Reseed a starved center at the point paying the most.
        Eigen::Index worst = 0;
        double worstd = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (taken[static_cast<std::size_t>(i)]) continue;
          if (cur.dist2[i] > worstd) {
            worstd = cur.dist2[i];
            worst = i;
          }
        }
        centers.row(l) = points.row(worst);
        taken[static_cast<std::size_t>(worst)] = true;
      }
    }
    cur = assign_points(points, centers);
    if (prev_cost - cur.cost <= 1e-6 * std::max(prev_cost, 1e-300)) break;
    prev_cost = cur.cost;
  }
  KMeansResult out;
  out.centers = std::move(centers);
  out.assignment = std::move(cur.assignment);
  out.cost = cur.cost;
  return out;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, int restarts,
                    std::uint64_t seed) {
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("k must lie in [1, #points]");
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  KMeansResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    rng::Stream stream(seed, rng::Stage::KMeansSeed, static_cast<std::uint64_t>(r));
    KMeansResult run = lloyd(points, seed_plus_plus(points, k, stream));
    if (run.cost < best.cost) best = std::move(run);
  }
  return best;
}

double one_means_cost(const EntitySeries& x) {
  const Eigen::RowVectorXd mean =
      x.observations.colwise().sum() / static_cast<double>(x.length());
  double acc = 0.0;
  for (Eigen::Index r = 0; r < x.observations.rows(); ++r) {
    acc += (x.observations.row(r) - mean).squaredNorm();
  }
  return acc;
}

}  // namespace tsc
