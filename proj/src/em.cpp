#include "tsc/em.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsc/kmeans.hpp"
#include "tsc/model.hpp"
#include "tsc/rng.hpp"
#include "tsc/threading.hpp"

namespace tsc {

namespace {

// Weighted per-entity moments of the kept steps. Everything the iteration
// needs is a function of these, so the loop cost does not grow with T_i.
struct EntityMoments {
  double weight = 0.0;   // outer entity weight w(i)
  double length = 0.0;   // full series length T_i
  double u1 = 0.0;       // weight on step 1 (0 when step 1 was not kept)
  Vector y1;             // x_{i,1}
  double usum = 0.0;     // sum of weights over kept steps t >= 2
  Vector s_cur;          // sum w_t x_t        over kept t >= 2
  Vector s_prev;         // sum w_t x_{t-1}
  Matrix c_cur;          // sum w_t x_t x_t^T
  Matrix c_cross;        // sum w_t x_t x_{t-1}^T
  Matrix c_prev;         // sum w_t x_{t-1} x_{t-1}^T
};

std::vector<EntityMoments> collect_moments(const TimeSeriesDataset& data,
                                           const Coreset& s) {
  const int d = data.dim();
  std::vector<EntityMoments> out(s.entity_ids.size());
  parallel_for(s.entity_ids.size(), [&](std::size_t j) {
    const int id = s.entity_ids[j];
    const EntitySeries& x = data.entities[id];
    EntityMoments& m = out[j];
    m.weight = s.entity_weights.at(id);
    m.length = static_cast<double>(x.length());
    m.y1 = x.at(1);
    m.s_cur = Vector::Zero(d);
    m.s_prev = Vector::Zero(d);
    m.c_cur = Matrix::Zero(d, d);
    m.c_cross = Matrix::Zero(d, d);
    m.c_prev = Matrix::Zero(d, d);
    const auto& tw = s.time_weights.at(id);
    for (int t : s.time_indices.at(id)) {
      const double w = tw.at(t);
      if (t == 1) {
        m.u1 = w;
        continue;
      }
      const Vector cur = x.at(t);
      const Vector prev = x.at(t - 1);
      m.usum += w;
      m.s_cur += w * cur;
      m.s_prev += w * prev;
      m.c_cur += w * cur * cur.transpose();
      m.c_cross += w * cur * prev.transpose();
      m.c_prev += w * prev * prev.transpose();
    }
  });
  return out;
}

// Per-component pieces reused across entities within one objective pass.
struct ComponentCtx {
  Matrix inv;      // Sigma^{-1}
  Matrix first;    // Sigma^{-1} - Lambda Sigma^{-1} Lambda (step-1 form)
  Matrix inv_b;    // Sigma^{-1} (I - Lambda)
  Matrix b_inv_b;  // (I - Lambda) Sigma^{-1} (I - Lambda)
  Vector ar;
  Vector mu;
  double log_norm = 0.0;
  double log_alpha = 0.0;  // -inf marks a dead component
};

std::vector<ComponentCtx> component_ctx(const MixtureParams& p) {
  std::vector<ComponentCtx> out(p.components.size());
  for (std::size_t l = 0; l < p.components.size(); ++l) {
    const Component& c = p.components[l];
    const Eigen::Index d = c.mu().size();
    ComponentCtx& ctx = out[l];
    ctx.inv = c.sigma_inv();
    ctx.ar = c.ar();
    ctx.mu = c.mu();
    Matrix lam_il = ctx.inv;
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index q = 0; q < d; ++q) {
        lam_il(r, q) *= ctx.ar[r] * ctx.ar[q];
      }
    }
    ctx.first = ctx.inv - lam_il;
    const Vector b = Vector::Ones(d) - ctx.ar;
    ctx.inv_b = ctx.inv * b.asDiagonal();
    ctx.b_inv_b = b.asDiagonal() * ctx.inv * b.asDiagonal();
    ctx.log_norm = c.log_normalizer();
    ctx.log_alpha = p.alpha[static_cast<Eigen::Index>(l)] > 0.0
                        ? std::log(p.alpha[static_cast<Eigen::Index>(l)])
                        : -std::numeric_limits<double>::infinity();
  }
  return out;
}

// Weighted cost sum of one entity under one component, from moments.
double moment_cost(const EntityMoments& m, const ComponentCtx& c) {
  const Vector u1 = m.y1 - c.mu;
  double acc = m.u1 > 0.0 ? m.u1 * u1.dot(c.first * u1) : 0.0;
  if (m.usum > 0.0) {
    const Vector bmu = c.mu - c.ar.cwiseProduct(c.mu);  // (I - Lambda) mu
    const Vector sv = m.s_cur - c.ar.cwiseProduct(m.s_prev);
    const Matrix scatter = m.c_cur - m.c_cross * c.ar.asDiagonal() -
                           c.ar.asDiagonal() * m.c_cross.transpose() +
                           c.ar.asDiagonal() * m.c_prev * c.ar.asDiagonal();
    acc += (c.inv * scatter).trace() - 2.0 * sv.dot(c.inv * bmu) +
           m.usum * bmu.dot(c.inv * bmu);
  }
  return acc;
}

struct ObjectiveState {
  double value = 0.0;            // optimization objective
  Matrix resp;                   // n_kept x k responsibilities
  Vector entity_term;            // per-entity weighted negative log term
};

// Optimization objective: the coreset kernel NLL evaluated at the
// normalizer-reweighted mixing, plus the mixing-dependent offset. The two
// Z terms cancel against each other except for the mismatch between the
// total entity weight and N, so the computation folds them together.
ObjectiveState evaluate(const std::vector<EntityMoments>& moments,
                        const std::vector<ComponentCtx>& ctx, double n_total,
                        bool with_resp) {
  const auto n = static_cast<Eigen::Index>(moments.size());
  const auto k = static_cast<Eigen::Index>(ctx.size());
  ObjectiveState st;
  st.entity_term.resize(n);
  if (with_resp) st.resp.resize(n, k);
  Matrix logs(n, k);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const auto i = static_cast<Eigen::Index>(j);
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < k; ++l) {
      double v = ctx[static_cast<std::size_t>(l)].log_alpha;
      if (std::isfinite(v)) {
        v += -moment_cost(moments[j], ctx[static_cast<std::size_t>(l)]) /
                 (2.0 * moments[j].length) -
             ctx[static_cast<std::size_t>(l)].log_norm;
      }
      logs(i, l) = v;
      mx = std::max(mx, v);
    }
    double acc = 0.0;
    for (Eigen::Index l = 0; l < k; ++l) {
      if (std::isfinite(logs(i, l))) acc += std::exp(logs(i, l) - mx);
    }
    const double lse = mx + std::log(acc);
    st.entity_term[i] = -moments[j].weight * lse;
    if (with_resp) {
      for (Eigen::Index l = 0; l < k; ++l) {
        st.resp(i, l) = std::isfinite(logs(i, l)) ? std::exp(logs(i, l) - lse) : 0.0;
      }
    }
  });
  double total = 0.0;
  double wsum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    total += st.entity_term[i];
    wsum += moments[static_cast<std::size_t>(i)].weight;
  }
  // Residual of the normalizer offset: -(N - sum w) ln Z.
  std::vector<double> zlogs;
  for (const auto& c : ctx) {
    if (std::isfinite(c.log_alpha)) zlogs.push_back(c.log_alpha - c.log_norm);
  }
  double mz = -std::numeric_limits<double>::infinity();
  for (double v : zlogs) mz = std::max(mz, v);
  double za = 0.0;
  for (double v : zlogs) za += std::exp(v - mz);
  const double log_z = mz + std::log(za);
  st.value = total + (wsum - n_total) * log_z;
  return st;
}

MixtureParams m_step(const std::vector<EntityMoments>& moments,
                     const MixtureParams& cur, const Matrix& resp,
                     const FitConfig& config) {
  const int k = cur.k();
  const int d = cur.dim();
  const auto n = static_cast<Eigen::Index>(moments.size());
  const auto ctx = component_ctx(cur);
  const double ar_cap = config.bounds.max_ar();

  Vector alpha(k);
  std::vector<Vector> mus(static_cast<std::size_t>(k));
  std::vector<Vector> ars(static_cast<std::size_t>(k));
  std::vector<Matrix> sigmas(static_cast<std::size_t>(k));

  double wtotal = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) wtotal += moments[static_cast<std::size_t>(i)].weight;

  for (int l = 0; l < k; ++l) {
    const ComponentCtx& c = ctx[static_cast<std::size_t>(l)];
    // nu: responsibility mass; rho: mass scaled by 1/T_i as the cost terms demand.
    double nu = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      nu += moments[static_cast<std::size_t>(i)].weight * resp(i, l);
    }
    alpha[l] = nu / wtotal;

    // Mean: exact normal equations of the weighted quadratic in mu.
    Matrix h = Matrix::Zero(d, d);
    Vector g = Vector::Zero(d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const EntityMoments& m = moments[static_cast<std::size_t>(i)];
      const double rho = m.weight * resp(i, l) / m.length;
      if (rho <= 0.0) continue;
      if (m.u1 > 0.0) {
        h += rho * m.u1 * c.first;
        g += rho * m.u1 * (c.first * m.y1);
      }
      if (m.usum > 0.0) {
        h += rho * m.usum * c.b_inv_b;
        const Vector sv = m.s_cur - c.ar.cwiseProduct(m.s_prev);
        g += rho * (c.inv_b.transpose() * sv);
      }
    }
    Vector mu = c.mu;
    if (h.allFinite()) {
      Eigen::LDLT<Matrix> ldlt(0.5 * (h + h.transpose()));
      if (ldlt.info() == Eigen::Success) {
        const Vector cand = ldlt.solve(g);
        if (cand.allFinite()) mu = cand;
      }
    }
    mus[static_cast<std::size_t>(l)] = mu;

    // AR coefficients: per-dimension weighted lag-1 regression of residuals
    // around the new mean, clipped into the admissible range.
    Vector ar = c.ar;
    if (config.update_ar) {
      for (int r = 0; r < d; ++r) {
        double num = 0.0;
        double den = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const EntityMoments& m = moments[static_cast<std::size_t>(i)];
          const double rho = m.weight * resp(i, l) / m.length;
          if (rho <= 0.0 || m.usum <= 0.0) continue;
          num += rho * (m.c_cross(r, r) - mu[r] * m.s_cur[r] -
                        mu[r] * m.s_prev[r] + mu[r] * mu[r] * m.usum);
          den += rho * (m.c_prev(r, r) - 2.0 * mu[r] * m.s_prev[r] +
                        mu[r] * mu[r] * m.usum);
        }
        ar[r] = den > 1e-300 ? std::clamp(num / den, 0.0, ar_cap) : 0.0;
      }
    }
    ars[static_cast<std::size_t>(l)] = ar;

    // Covariance: weighted innovation scatter around (mu, ar); the step-1
    // residual enters damped by sqrt(1 - ar^2) per dimension, matching its
    // stationary-form cost. Eigenvalue floor keeps it SPD.
    Matrix sigma = cur.components[static_cast<std::size_t>(l)].sigma();
    if (config.update_sigma && nu > 1e-12) {
      Matrix w = Matrix::Zero(d, d);
      const Vector bmu = mu - ar.cwiseProduct(mu);
      for (Eigen::Index i = 0; i < n; ++i) {
        const EntityMoments& m = moments[static_cast<std::size_t>(i)];
        const double rho = m.weight * resp(i, l) / m.length;
        if (rho <= 0.0) continue;
        if (m.u1 > 0.0) {
          Vector e1 = m.y1 - mu;
          for (int r = 0; r < d; ++r) e1[r] *= std::sqrt(1.0 - ar[r] * ar[r]);
          w += rho * m.u1 * e1 * e1.transpose();
        }
        if (m.usum > 0.0) {
          const Vector sv = m.s_cur - ar.cwiseProduct(m.s_prev);
          Matrix scatter = m.c_cur - m.c_cross * ar.asDiagonal() -
                           ar.asDiagonal() * m.c_cross.transpose() +
                           ar.asDiagonal() * m.c_prev * ar.asDiagonal();
          scatter += -sv * bmu.transpose() - bmu * sv.transpose() +
                     m.usum * bmu * bmu.transpose();
          w += rho * scatter;
        }
      }
      Matrix cand = 0.5 * (w + w.transpose()) / nu;
      Eigen::SelfAdjointEigenSolver<Matrix> es(cand);
      if (es.info() == Eigen::Success) {
        const Vector ev = es.eigenvalues().cwiseMax(1e-8);
        sigma = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
      }
    }
    sigmas[static_cast<std::size_t>(l)] = sigma;
  }

  // Guard the simplex against rounding drift.
  const double asum = alpha.sum();
  if (!(asum > 0.0)) throw std::runtime_error("mixing weights collapsed");
  alpha /= asum;

  MixtureParams next;
  next.alpha = alpha;
  next.components.reserve(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) {
    next.components.emplace_back(mus[static_cast<std::size_t>(l)],
                                 sigmas[static_cast<std::size_t>(l)],
                                 ars[static_cast<std::size_t>(l)]);
  }
  return next;
}

MixtureParams blend(const MixtureParams& prev, const MixtureParams& prop,
                    double eta) {
  MixtureParams out;
  out.alpha = prev.alpha + eta * (prop.alpha - prev.alpha);
  out.alpha /= out.alpha.sum();
  for (std::size_t l = 0; l < prev.components.size(); ++l) {
    const Component& a = prev.components[l];
    const Component& b = prop.components[l];
    out.components.emplace_back(a.mu() + eta * (b.mu() - a.mu()),
                                a.sigma() + eta * (b.sigma() - a.sigma()),
                                a.ar() + eta * (b.ar() - a.ar()));
  }
  return out;
}

// Weighted mean and covariance of one entity's kept observations. Used to
// re-seed a degenerate component at a concrete entity's location and scale.
struct SeedPoint {
  Vector mean;
  Matrix cov;
};

SeedPoint entity_seed(const EntityMoments& m) {
  const auto d = m.y1.size();
  SeedPoint sp;
  const double steps = m.u1 + m.usum;
  if (steps <= 0.0) {
    sp.mean = m.y1;
    sp.cov = Matrix::Zero(d, d);
    return sp;
  }
  sp.mean = (m.u1 * m.y1 + m.s_cur) / steps;
  const Matrix raw = (m.u1 * m.y1 * m.y1.transpose() + m.c_cur) / steps;
  sp.cov = raw - sp.mean * sp.mean.transpose();
  return sp;
}

Matrix spd_floor(const Matrix& m, double floor, const Matrix& fallback) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) return fallback;
  const Vector ev = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

bool near_duplicate(const Component& a, const Component& b) {
  const double rm =
      (a.mu() - b.mu()).norm() / (1.0 + a.mu().norm() + b.mu().norm());
  const double rs = (a.sigma() - b.sigma()).norm() /
                    (1.0 + a.sigma().norm() + b.sigma().norm());
  const double ra =
      (a.ar() - b.ar()).norm() / (1.0 + a.ar().norm() + b.ar().norm());
  return rm <= 0.02 && rs <= 0.02 && ra <= 0.02;
}

// Re-seed components that stopped contributing: ones with no responsibility
// mass and, when split_duplicates is set, every later member of a group of
// numerically indistinguishable components. Coinciding components are a
// stationary point the update map cannot leave on its own; moving the copies
// onto the worst-fit entities gives the solver a concrete direction to try.
// The caller treats the mutation as tentative and rolls it back if the
// objective never recovers.
bool revive_degenerate(const std::vector<EntityMoments>& moments,
                       const ObjectiveState& cur, bool split_duplicates,
                       MixtureParams& params) {
  const int k = params.k();
  const auto n = static_cast<Eigen::Index>(moments.size());
  Vector mass = Vector::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int l = 0; l < k; ++l) {
      mass[l] += moments[static_cast<std::size_t>(i)].weight * cur.resp(i, l);
    }
  }
  std::vector<int> victims;
  std::vector<bool> dead_mask(static_cast<std::size_t>(k), false);
  for (int l = 0; l < k; ++l) {
    if (mass[l] < 1e-12) {
      victims.push_back(l);
      dead_mask[static_cast<std::size_t>(l)] = true;
    }
  }
  if (split_duplicates) {
    for (int l = 1; l < k; ++l) {
      if (dead_mask[static_cast<std::size_t>(l)]) continue;
      for (int m = 0; m < l; ++m) {
        if (dead_mask[static_cast<std::size_t>(m)]) continue;
        const bool m_taken =
            std::find(victims.begin(), victims.end(), m) != victims.end();
        if (m_taken) continue;
        if (near_duplicate(params.components[static_cast<std::size_t>(l)],
                           params.components[static_cast<std::size_t>(m)])) {
          victims.push_back(l);
          break;
        }
      }
    }
  }
  if (victims.empty()) return false;

  // Rank entities by how badly they fit; each victim lands on a distinct one
  // of the worst.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return cur.entity_term[a] > cur.entity_term[b];
                   });
  Vector alpha = params.alpha;
  for (std::size_t j = 0; j < victims.size(); ++j) {
    const int l = victims[j];
    const Component& old = params.components[static_cast<std::size_t>(l)];
    const SeedPoint sp =
        entity_seed(moments[static_cast<std::size_t>(order[j % order.size()])]);
    const double floor =
        std::max(1e-8, 1e-4 * old.sigma().trace() /
                           static_cast<double>(old.dim()));
    params.components[static_cast<std::size_t>(l)] =
        Component(sp.mean, spd_floor(sp.cov, floor, old.sigma()), old.ar());
    if (dead_mask[static_cast<std::size_t>(l)]) {
      alpha[l] = std::max(alpha[l], 0.5 / k);
    }
  }
  params.alpha = alpha / alpha.sum();
  return true;
}

struct RestartOutcome {
  MixtureParams params;
  std::vector<double> trace;
  double objective = std::numeric_limits<double>::infinity();
  int iters = 0;
};

RestartOutcome run_restart(const std::vector<EntityMoments>& moments,
                           double n_total, MixtureParams params,
                           const FitConfig& config) {
  RestartOutcome out;
  ObjectiveState cur = evaluate(moments, component_ctx(params), n_total, true);
  if (!std::isfinite(cur.value)) {
    throw std::runtime_error("non-finite objective at initialization");
  }
  out.trace.push_back(cur.value);
  // Params the last recorded trace value belongs to; re-seeding runs as a
  // tentative phase whose values stay off the trace until they drop below
  // the anchor, and the phase is rolled back when that never happens.
  MixtureParams anchor = params;
  bool escaping = false;

  const auto reseed = [&](bool split_duplicates) {
    if (!revive_degenerate(moments, cur, split_duplicates, params)) {
      return false;
    }
    cur = evaluate(moments, component_ctx(params), n_total, true);
    if (!std::isfinite(cur.value)) {
      throw std::runtime_error("non-finite objective during fitting");
    }
    escaping = true;
    return true;
  };

  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (!escaping) reseed(false);

    const double base = escaping ? cur.value : out.trace.back();
    const double slack = config.tol * (1.0 + std::abs(base));
    const MixtureParams prop = m_step(moments, params, cur.resp, config);

    bool accepted = false;
    double eta = 1.0;
    ObjectiveState st;
    for (int h = 0; h <= 10; ++h) {
      const MixtureParams cand = h == 0 ? prop : blend(params, prop, eta);
      st = evaluate(moments, component_ctx(cand), n_total, true);
      if (!std::isfinite(st.value)) {
        throw std::runtime_error("non-finite objective during fitting");
      }
      if (st.value <= base + slack) {
        params = cand;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }

    if (!accepted) {
      // Nothing acceptable from here; as a last resort split coinciding
      // components and retry, otherwise stop.
      if (!escaping && iter + 1 < config.max_iters && reseed(true)) continue;
      break;
    }

    const double gained = base - st.value;
    cur = std::move(st);
    if (escaping) {
      if (cur.value <= out.trace.back()) {
        escaping = false;
        out.trace.push_back(cur.value);
        anchor = params;
        out.iters = iter + 1;
      } else if (gained < slack) {
        break;  // the tentative phase stalled without reaching the anchor
      }
    } else {
      const double prev = out.trace.back();
      out.trace.push_back(cur.value);
      anchor = params;
      out.iters = iter + 1;
      if (prev - cur.value < slack) {
        if (iter + 1 < config.max_iters && reseed(true)) continue;
        break;
      }
    }
  }

  if (escaping) params = std::move(anchor);
  out.params = std::move(params);
  out.objective = out.trace.back();
  return out;
}

}  // namespace

MixtureParams init_params(const TimeSeriesDataset& data, int k,
                          std::uint64_t seed, const ModelBounds& bounds) {
  bounds.validate();
  const EntitySummaries sm = entity_summaries(data);
  const KMeansResult km = kmeans(sm.means, k, 1, seed);

  const int d = data.dim();
  Matrix pooled = Matrix::Zero(d, d);
  double steps = 0.0;
  for (int i = 0; i < data.num_entities(); ++i) {
    const Matrix& obs = data.entities[static_cast<std::size_t>(i)].observations;
    const Eigen::RowVectorXd mean = sm.means.row(i);
    for (Eigen::Index t = 0; t < obs.rows(); ++t) {
      const Vector e = (obs.row(t) - mean).transpose();
      pooled += e * e.transpose();
      steps += 1.0;
    }
  }
  pooled = pooled / steps + 1e-6 * Matrix::Identity(d, d);

  MixtureParams p;
  p.alpha = Vector::Constant(k, 1.0 / k);
  for (int l = 0; l < k; ++l) {
    p.components.emplace_back(km.centers.row(l).transpose(), pooled,
                              Vector::Zero(d));
  }
  return p;
}

FitResult fit(const TimeSeriesDataset& data, const Coreset* coreset,
              const FitConfig& config,
              const std::optional<MixtureParams>& init) {
  const auto t0 = std::chrono::steady_clock::now();
  data.validate();
  config.bounds.validate();
  if (config.k < 1) throw std::invalid_argument("k must be >= 1");
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(config.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (config.n_init < 1) throw std::invalid_argument("n_init must be >= 1");

  Coreset identity;
  const Coreset* s = coreset;
  if (s == nullptr) {
    identity = identity_coreset(data);
    s = &identity;
  } else {
    s->validate(data);
  }
  const std::vector<EntityMoments> moments = collect_moments(data, *s);
  const double n_total = static_cast<double>(data.num_entities());

  if (init) {
    init->validate(config.bounds);
    if (init->k() != config.k || init->dim() != data.dim()) {
      throw std::invalid_argument("init shape mismatch");
    }
  }
  const int restarts = init ? 1 : config.n_init;

  RestartOutcome best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    MixtureParams start =
        init ? *init
             : init_params(data, config.k,
                           rng::derive_key(config.seed, rng::Stage::FitInit,
                                           static_cast<std::uint64_t>(r)),
                           config.bounds);
    RestartOutcome run = run_restart(moments, n_total, std::move(start), config);
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }

  FitResult out;
  out.params = std::move(best.params);
  out.trace = std::move(best.trace);
  out.iters = best.iters;
  out.objective = total_nll(data, out.params);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace tsc
