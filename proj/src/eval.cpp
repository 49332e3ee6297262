#include "tsc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tsc/coreset.hpp"
#include "tsc/model.hpp"
#include "tsc/rng.hpp"

namespace tsc {

double likelihood_ratio_stat(double v_full, double v_coreset) {
  return 2.0 * (v_coreset - v_full);
}

std::vector<int> align_components(const MixtureParams& fitted,
                                  const MixtureParams& reference) {
  const int k = reference.k();
  if (fitted.k() != k) throw std::invalid_argument("component counts differ");
  if (k > 8) throw std::invalid_argument("alignment supports k <= 8");
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int l = 0; l < k; ++l) {
      cost += (fitted.components[static_cast<std::size_t>(perm[static_cast<std::size_t>(l)])].mu() -
               reference.components[static_cast<std::size_t>(l)].mu())
                  .squaredNorm();
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double aligned_mean_error(const MixtureParams& fitted,
                          const MixtureParams& reference) {
  const std::vector<int> perm = align_components(fitted, reference);
  double worst = 0.0;
  for (int l = 0; l < reference.k(); ++l) {
    worst = std::max(
        worst,
        (fitted.components[static_cast<std::size_t>(perm[static_cast<std::size_t>(l)])].mu() -
         reference.components[static_cast<std::size_t>(l)].mu())
            .norm());
  }
  return worst;
}

namespace {

std::uint64_t rep_key(std::uint64_t seed, std::size_t point, int rep, int slot) {
  const std::uint64_t id = (static_cast<std::uint64_t>(point) << 24) |
                           (static_cast<std::uint64_t>(rep) << 8) |
                           static_cast<std::uint64_t>(slot);
  return rng::derive_key(seed, rng::Stage::Experiment, id);
}

AggregateRecord aggregate(const std::string& method, double eps,
                          const std::vector<const RepRecord*>& rows) {
  AggregateRecord a;
  a.method = method;
  a.epsilon = eps;
  a.reps_used = static_cast<int>(rows.size());
  if (rows.empty()) return a;
  for (const RepRecord* r : rows) {
    a.size_mean += static_cast<double>(r->size);
    a.v_mean += r->v_coreset;
    a.gamma_mean += r->gamma;
    a.build_seconds_mean += r->build_seconds;
    a.fit_seconds_mean += r->fit_seconds;
  }
  const double n = static_cast<double>(rows.size());
  a.size_mean /= n;
  a.v_mean /= n;
  a.gamma_mean /= n;
  a.build_seconds_mean /= n;
  a.fit_seconds_mean /= n;
  if (rows.size() >= 2) {
    double acc = 0.0;
    for (const RepRecord* r : rows) {
      acc += (r->gamma - a.gamma_mean) * (r->gamma - a.gamma_mean);
    }
    a.gamma_std = std::sqrt(acc / (n - 1.0));
  }
  return a;
}

}  // namespace

ExperimentReport run_experiment(const GenConfig& gen,
                                const std::vector<ExperimentPoint>& points,
                                int reps, const FitConfig& fit_config,
                                const std::vector<std::string>& methods,
                                std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (points.empty()) throw std::invalid_argument("no experiment points given");
  for (const auto& m : methods) {
    if (m != "crgmm" && m != "uniform" && m != "pooled") {
      throw std::invalid_argument("unknown method: " + m);
    }
  }

  ExperimentReport report;
  report.gen = gen;
  report.fit = fit_config;
  report.methods = methods;

  auto [data, truth] = generate(gen);

  FitResult full = fit(data, nullptr, fit_config);
  report.v_full = full.objective;
  report.full_fit_seconds = full.wall_seconds;

  const auto run_one = [&](const std::string& method, const Coreset& s,
                           double build_seconds, std::size_t point, int rep,
                           std::int64_t budget) {
    RepRecord row;
    row.method = method;
    row.epsilon = points[point].epsilon;
    row.rep = rep;
    row.size = budget;
    row.build_seconds = build_seconds;
    FitConfig fc = fit_config;
    fc.seed = rep_key(seed, point, rep, 4);
    FitResult r = fit(data, &s, fc);
    row.v_coreset = r.objective;
    row.gamma = likelihood_ratio_stat(report.v_full, r.objective);
    row.fit_seconds = r.wall_seconds;
    return row;
  };

  for (std::size_t e = 0; e < points.size(); ++e) {
    for (int rep = 0; rep < reps; ++rep) {
      // The two-stage coreset is always built: the baselines inherit its
      // realized pair count as their budget.
      SamplerConfig sc;
      sc.m_entities = points[e].m_entities;
      sc.l_times = points[e].l_times;
      sc.k = fit_config.k;
      sc.bounds = fit_config.bounds;
      sc.seed = rep_key(seed, e, rep, 0);
      CoresetBuild build;
      std::int64_t budget = 0;
      try {
        build = build_coreset(data, sc);
        budget = build.coreset.pair_count();
      } catch (const std::exception& ex) {
        for (const auto& m : methods) {
          RepRecord row;
          row.method = m;
          row.epsilon = points[e].epsilon;
          row.rep = rep;
          row.failed = true;
          row.error = ex.what();
          report.reps.push_back(row);
          ++report.failures;
        }
        continue;
      }

      for (const auto& m : methods) {
        try {
          if (m == "crgmm") {
            report.reps.push_back(run_one(m, build.coreset, build.build_seconds,
                                          e, rep, budget));
          } else if (m == "uniform") {
            const auto t0 = std::chrono::steady_clock::now();
            Coreset s = uniform_baseline(data, budget, rep_key(seed, e, rep, 1));
            const double bs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            report.reps.push_back(run_one(m, s, bs, e, rep, budget));
          } else {
            const auto t0 = std::chrono::steady_clock::now();
            Coreset s = pooled_baseline(data, budget, fit_config.k,
                                        rep_key(seed, e, rep, 2));
            const double bs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            report.reps.push_back(run_one(m, s, bs, e, rep, budget));
          }
        } catch (const std::exception& ex) {
          RepRecord row;
          row.method = m;
          row.epsilon = points[e].epsilon;
          row.rep = rep;
          row.failed = true;
          row.error = ex.what();
          report.reps.push_back(row);
          ++report.failures;
        }
      }
    }
  }

  for (std::size_t e = 0; e < points.size(); ++e) {
    for (const auto& m : methods) {
      std::vector<const RepRecord*> rows;
      for (const RepRecord& r : report.reps) {
        if (!r.failed && r.method == m && r.epsilon == points[e].epsilon) {
          rows.push_back(&r);
        }
      }
      report.aggregates.push_back(aggregate(m, points[e].epsilon, rows));
    }
  }
  return report;
}

}  // namespace tsc
