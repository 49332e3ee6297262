#include "tsc/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tsc/threading.hpp"

namespace tsc {

namespace {

double log_sum_exp(const std::vector<double>& logs) {
  if (logs.empty()) throw std::invalid_argument("empty log-sum-exp");
  double m = logs.front();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - m);
  return m + std::log(acc);
}

// Weighted per-component cost sums over the given 1-based steps. The full
// path and the coreset path both run through here with identical arithmetic
// (unit weights multiply exactly), so the identity coreset reproduces the
// full objective bit for bit.
template <typename StepRange, typename WeightFn>
Vector weighted_series_costs(const EntitySeries& x, const MixtureParams& p,
                             const StepRange& steps, WeightFn weight) {
  Vector out = Vector::Zero(p.k());
  for (int l = 0; l < p.k(); ++l) {
    const Component& c = p.components[l];
    double acc = 0.0;
    for (int t : steps) acc += weight(t) * obs_cost(x, t, c);
    out[l] = acc;
  }
  return out;
}

struct AllSteps {
  int len;
  struct It {
    int t;
    int operator*() const { return t; }
    It& operator++() { ++t; return *this; }
    bool operator!=(const It& o) const { return t != o.t; }
  };
  It begin() const { return {1}; }
  It end() const { return {len + 1}; }
};

// -ln sum_l alpha_l exp(-cost_l / (2 T)) with optional per-component extra
// log offsets (the Gaussian normalizers); zero-weight components skipped.
double mixture_neg_log(const Vector& alpha, const Vector& costs, double T,
                       const std::vector<double>* log_norm) {
  std::vector<double> logs;
  logs.reserve(alpha.size());
  for (Eigen::Index l = 0; l < alpha.size(); ++l) {
    if (alpha[l] <= 0.0) continue;
    double v = std::log(alpha[l]) - costs[l] / (2.0 * T);
    if (log_norm) v -= (*log_norm)[static_cast<std::size_t>(l)];
    logs.push_back(v);
  }
  return -log_sum_exp(logs);
}

std::vector<double> log_normalizers(const MixtureParams& p) {
  std::vector<double> out(p.components.size());
  for (std::size_t l = 0; l < p.components.size(); ++l) {
    out[l] = p.components[l].log_normalizer();
  }
  return out;
}

double reduce_over_entities(const TimeSeriesDataset& data,
                            const std::function<double(const EntitySeries&)>& term) {
  std::vector<double> slots(data.entities.size(), 0.0);
  parallel_for(data.entities.size(),
               [&](std::size_t i) { slots[i] = term(data.entities[i]); });
  double acc = 0.0;
  for (double v : slots) acc += v;
  return acc;
}

}  // namespace

double obs_cost(const EntitySeries& x, int t, const Component& c) {
  if (t < 1 || t > x.length()) throw std::out_of_range("time index out of range");
  const Vector u = x.at(t) - c.mu();
  if (t == 1) {
    const Vector lu = c.ar().cwiseProduct(u);
    return u.dot(c.sigma_inv() * u) - lu.dot(c.sigma_inv() * lu);
  }
  const Vector prev = x.at(t - 1) - c.mu();
  const Vector v = u - c.ar().cwiseProduct(prev);
  return v.dot(c.sigma_inv() * v);
}

double series_cost(const EntitySeries& x, const Component& c) {
  double acc = 0.0;
  for (int t = 1; t <= x.length(); ++t) acc += obs_cost(x, t, c);
  return acc;
}

double sq_dist_sum(const EntitySeries& x, const Vector& mu) {
  double acc = 0.0;
  for (int t = 1; t <= x.length(); ++t) {
    acc += (x.at(t) - mu).squaredNorm();
  }
  return acc;
}

double entity_nll(const EntitySeries& x, const MixtureParams& p) {
  const auto norms = log_normalizers(p);
  const Vector costs =
      weighted_series_costs(x, p, AllSteps{x.length()}, [](int) { return 1.0; });
  return mixture_neg_log(p.alpha, costs, x.length(), &norms);
}

double total_nll(const TimeSeriesDataset& data, const MixtureParams& p) {
  return reduce_over_entities(
      data, [&](const EntitySeries& x) { return entity_nll(x, p); });
}

double kernel_entity_nll(const EntitySeries& x, const MixtureParams& p) {
  const Vector costs =
      weighted_series_costs(x, p, AllSteps{x.length()}, [](int) { return 1.0; });
  return mixture_neg_log(p.alpha, costs, x.length(), nullptr);
}

double kernel_nll(const TimeSeriesDataset& data, const MixtureParams& p) {
  return reduce_over_entities(
      data, [&](const EntitySeries& x) { return kernel_entity_nll(x, p); });
}

NllSplit normalized_nll(const TimeSeriesDataset& data, const MixtureParams& p) {
  p.validate();
  const auto norms = log_normalizers(p);
  std::vector<double> logs;
  logs.reserve(p.components.size());
  for (Eigen::Index l = 0; l < p.alpha.size(); ++l) {
    if (p.alpha[l] <= 0.0) continue;
    logs.push_back(std::log(p.alpha[l]) - norms[static_cast<std::size_t>(l)]);
  }
  const double log_z = log_sum_exp(logs);

  NllSplit split;
  split.coef = Vector::Zero(p.alpha.size());
  for (Eigen::Index l = 0; l < p.alpha.size(); ++l) {
    if (p.alpha[l] <= 0.0) continue;
    split.coef[l] = std::exp(std::log(p.alpha[l]) -
                             norms[static_cast<std::size_t>(l)] - log_z);
  }
  split.offset = -static_cast<double>(data.num_entities()) * log_z;

  MixtureParams reweighted = p;
  reweighted.alpha = split.coef;
  split.kernel = kernel_nll(data, reweighted);
  return split;
}

double coreset_kernel_nll(const TimeSeriesDataset& data, const Coreset& s,
                          const MixtureParams& p) {
  s.validate(data);
  std::vector<double> slots(s.entity_ids.size(), 0.0);
  parallel_for(s.entity_ids.size(), [&](std::size_t j) {
    const int id = s.entity_ids[j];
    const EntitySeries& x = data.entities[id];
    const auto& steps = s.time_indices.at(id);
    const auto& tw = s.time_weights.at(id);
    const Vector costs = weighted_series_costs(
        x, p, steps, [&](int t) { return tw.at(t); });
    slots[j] = s.entity_weights.at(id) *
               mixture_neg_log(p.alpha, costs, x.length(), nullptr);
  });
  double acc = 0.0;
  for (double v : slots) acc += v;
  return acc;
}

double condition_ratio(const MixtureParams& p) {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : p.components) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.sigma());
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("covariance eigenvalue solve failed");
    }
    hi = std::max(hi, es.eigenvalues().maxCoeff());
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  if (!(lo > 0.0)) throw std::runtime_error("covariance not positive definite");
  return hi / lo;
}

}  // namespace tsc
