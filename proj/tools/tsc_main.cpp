// tsc: build and evaluate weighted subsamples of panel time-series data for
// mixture clustering. Subcommands: generate, coreset, fit, eval, experiment.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsc/coreset.hpp"
#include "tsc/datagen.hpp"
#include "tsc/em.hpp"
#include "tsc/eval.hpp"
#include "tsc/io.hpp"
#include "tsc/model.hpp"
#include "tsc/threading.hpp"
#include "tsc/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string manifest;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "Base RNG seed")->required();
  cmd->add_option("--threads", c.threads,
                  "Worker threads (0 = all cores; TSC_THREADS overrides)")
      ->default_val(0);
  cmd->add_option("--manifest", c.manifest,
                  "Write a run manifest with artifact hashes to this path");
}

void finish_run(const CommonOpts& c, const std::string& command,
                const ordered_json& config,
                const std::vector<std::filesystem::path>& artifacts) {
  if (c.manifest.empty()) return;
  tsc::io::RunManifest m;
  m.command = command;
  m.config_json = config.dump();
  m.seed = c.seed;
  m.tool_version = tsc::kVersion;
  for (const auto& p : artifacts) {
    m.artifact_hashes[p.string()] = tsc::io::fnv1a_hex(tsc::io::fnv1a_file(p));
  }
  tsc::io::write_manifest(c.manifest, m);
}

tsc::GenConfig gen_from_cli(CLI::App* cmd, const std::string& preset, int n,
                            int t, int d, int k, double lambda,
                            const std::string& init, std::uint64_t seed) {
  tsc::GenConfig cfg;
  if (!preset.empty()) {
    cfg = tsc::preset(preset);
  } else {
    cfg.n_entities = n;
    cfg.series_len = t;
    cfg.d = d;
    cfg.k = k;
    cfg.lambda = lambda;
  }
  // Explicit flags refine a preset.
  if (!preset.empty()) {
    if (cmd->count("--n") > 0) cfg.n_entities = n;
    if (cmd->count("--t") > 0) cfg.series_len = t;
    if (cmd->count("--d") > 0) cfg.d = d;
    if (cmd->count("--k") > 0) cfg.k = k;
    if (cmd->count("--lambda") > 0) cfg.lambda = lambda;
  }
  if (init == "zero") {
    cfg.init = tsc::ErrorInit::Zero;
  } else if (init == "stationary") {
    cfg.init = tsc::ErrorInit::Stationary;
  } else {
    throw CLI::ValidationError("--init", "must be 'stationary' or 'zero'");
  }
  cfg.seed = seed;
  return cfg;
}

ordered_json gen_to_json(const tsc::GenConfig& cfg) {
  ordered_json j;
  j["n_entities"] = cfg.n_entities;
  j["series_len"] = cfg.series_len;
  j["d"] = cfg.d;
  j["k"] = cfg.k;
  j["lambda"] = cfg.lambda;
  j["seed"] = cfg.seed;
  j["init"] = cfg.init == tsc::ErrorInit::Stationary ? "stationary" : "zero";
  return j;
}

int run_generate(CLI::App* cmd, const CommonOpts& c, const std::string& preset,
                 int n, int t, int d, int k, double lambda,
                 const std::string& init, const std::string& out,
                 const std::string& truth_out, const std::string& format) {
  tsc::GenConfig cfg = gen_from_cli(cmd, preset, n, t, d, k, lambda, init, c.seed);
  const auto [data, truth] = tsc::generate(cfg);
  std::vector<std::filesystem::path> artifacts;
  tsc::io::write_dataset(out, data, format == "bin");
  artifacts.emplace_back(out);
  if (!truth_out.empty()) {
    tsc::io::write_ground_truth(truth_out, truth);
    artifacts.emplace_back(truth_out);
  }
  std::printf("generated N=%d total_obs=%lld d=%d\n", data.num_entities(),
              static_cast<long long>(data.total_observations()),
              data.dim());
  finish_run(c, "generate", gen_to_json(cfg), artifacts);
  return 0;
}

int run_coreset(const CommonOpts& c, const std::string& data_path,
                const std::string& method, int m, int l, int k, double d_ratio,
                double lambda, const std::string& out) {
  const tsc::TimeSeriesDataset data = tsc::io::read_dataset(data_path);
  tsc::ModelBounds bounds;
  bounds.d_ratio = d_ratio;
  bounds.lambda = lambda;
  bounds.validate();

  tsc::Coreset coreset;
  if (method == "crgmm") {
    tsc::SamplerConfig sc;
    sc.m_entities = m;
    sc.l_times = l;
    sc.k = k;
    sc.seed = c.seed;
    sc.bounds = bounds;
    coreset = tsc::build_coreset(data, sc).coreset;
  } else if (method == "uni") {
    const long long budget = static_cast<long long>(m) * l;
    coreset = tsc::uniform_baseline(data, budget, c.seed);
  } else if (method == "lfkf") {
    const long long budget = static_cast<long long>(m) * l;
    coreset = tsc::pooled_baseline(data, budget, k, c.seed);
  } else {
    throw CLI::ValidationError("--method", "must be crgmm, uni, or lfkf");
  }

  tsc::io::CoresetMeta meta;
  meta.method = method;
  meta.seed = c.seed;
  meta.m_entities = m;
  meta.l_times = l;
  tsc::io::write_coreset(out, coreset, meta);
  std::printf("coreset method=%s entities=%zu pairs=%lld\n", method.c_str(),
              coreset.entity_ids.size(),
              static_cast<long long>(coreset.pair_count()));

  ordered_json cfg;
  cfg["data"] = data_path;
  cfg["method"] = method;
  cfg["m_entities"] = m;
  cfg["l_times"] = l;
  cfg["k"] = k;
  cfg["d_ratio"] = d_ratio;
  cfg["lambda"] = lambda;
  finish_run(c, "coreset", cfg, {out});
  return 0;
}

int run_fit(const CommonOpts& c, const std::string& data_path,
            const std::string& coreset_path, int k, int max_iters, double tol,
            int n_init, double d_ratio, double lambda,
            const std::string& out) {
  const tsc::TimeSeriesDataset data = tsc::io::read_dataset(data_path);
  std::optional<tsc::Coreset> coreset;
  if (!coreset_path.empty()) {
    coreset = tsc::io::read_coreset(coreset_path);
    coreset->validate(data);
  }

  tsc::FitConfig fc;
  fc.k = k;
  fc.max_iters = max_iters;
  fc.tol = tol;
  fc.n_init = n_init;
  fc.seed = c.seed;
  fc.bounds.d_ratio = d_ratio;
  fc.bounds.lambda = lambda;
  fc.bounds.validate();

  const tsc::FitResult res =
      tsc::fit(data, coreset ? &*coreset : nullptr, fc, std::nullopt);
  tsc::io::write_params(out, res.params);
  std::printf("fit k=%d iters=%d objective=%.17g\n", k, res.iters,
              res.objective);

  ordered_json cfg;
  cfg["data"] = data_path;
  cfg["coreset"] = coreset_path;
  cfg["k"] = k;
  cfg["max_iters"] = max_iters;
  cfg["tol"] = tol;
  cfg["n_init"] = n_init;
  cfg["d_ratio"] = d_ratio;
  cfg["lambda"] = lambda;
  finish_run(c, "fit", cfg, {out});
  return 0;
}

int run_eval(const CommonOpts& c, const std::string& data_path,
             const std::string& params_path, const std::string& ref_path,
             const std::string& out) {
  const tsc::TimeSeriesDataset data = tsc::io::read_dataset(data_path);
  const tsc::MixtureParams params = tsc::io::read_params(params_path);
  const double v = tsc::total_nll(data, params);
  ordered_json j;
  j["schema"] = tsc::kReportSchema;
  j["v"] = v;
  if (!ref_path.empty()) {
    const tsc::MixtureParams ref = tsc::io::read_params(ref_path);
    const double v_ref = tsc::total_nll(data, ref);
    j["v_reference"] = v_ref;
    j["gamma"] = tsc::likelihood_ratio_stat(v_ref, v);
    std::printf("V=%.17g V_ref=%.17g gamma=%.17g\n", v, v_ref,
                tsc::likelihood_ratio_stat(v_ref, v));
  } else {
    std::printf("V=%.17g\n", v);
  }
  std::vector<std::filesystem::path> artifacts;
  if (!out.empty()) {
    std::ofstream o(out);
    if (!o) throw std::runtime_error("cannot open for writing: " + out);
    o << j.dump(2) << "\n";
    artifacts.emplace_back(out);
  }
  ordered_json cfg;
  cfg["data"] = data_path;
  cfg["params"] = params_path;
  cfg["reference"] = ref_path;
  finish_run(c, "eval", cfg, artifacts);
  return 0;
}

std::vector<tsc::ExperimentPoint> parse_points(
    const std::vector<std::string>& specs) {
  std::vector<tsc::ExperimentPoint> points;
  for (const auto& s : specs) {
    // Format: EPSILON:MxL, e.g. 0.1:60x40
    tsc::ExperimentPoint p;
    const auto colon = s.find(':');
    const auto ex = s.find('x', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || ex == std::string::npos) {
      throw CLI::ValidationError("--point", "expected EPSILON:MxL, got " + s);
    }
    try {
      p.epsilon = std::stod(s.substr(0, colon));
      p.m_entities = std::stoi(s.substr(colon + 1, ex - colon - 1));
      p.l_times = std::stoi(s.substr(ex + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--point", "expected EPSILON:MxL, got " + s);
    }
    points.push_back(p);
  }
  return points;
}

int run_experiment(CLI::App* cmd, const CommonOpts& c,
                   const std::string& preset, int n, int t, int d, int k,
                   double lambda, const std::string& init,
                   const std::vector<std::string>& point_specs, int reps,
                   int fit_k, int max_iters, double tol, int n_init,
                   double d_ratio, double fit_lambda,
                   const std::vector<std::string>& methods,
                   const std::string& out_json, const std::string& out_csv,
                   bool timings) {
  tsc::GenConfig gen =
      gen_from_cli(cmd, preset, n, t, d, k, lambda, init, c.seed);
  const std::vector<tsc::ExperimentPoint> points = parse_points(point_specs);
  if (points.empty()) {
    throw CLI::ValidationError("--point", "at least one point is required");
  }

  tsc::FitConfig fc;
  fc.k = fit_k;
  fc.max_iters = max_iters;
  fc.tol = tol;
  fc.n_init = n_init;
  fc.seed = c.seed;
  fc.bounds.d_ratio = d_ratio;
  fc.bounds.lambda = fit_lambda;
  fc.bounds.validate();

  const tsc::ExperimentReport report =
      tsc::run_experiment(gen, points, reps, fc, methods, c.seed);

  std::vector<std::filesystem::path> artifacts;
  if (!out_json.empty()) {
    tsc::io::write_report_json(out_json, report, timings);
    artifacts.emplace_back(out_json);
  }
  if (!out_csv.empty()) {
    tsc::io::write_report_csv(out_csv, report, timings);
    artifacts.emplace_back(out_csv);
  }
  for (const auto& a : report.aggregates) {
    std::printf("eps=%g method=%s reps=%d gamma_mean=%.6g gamma_std=%.6g\n",
                a.epsilon, a.method.c_str(), a.reps_used, a.gamma_mean,
                a.gamma_std);
  }
  if (report.failures > 0) {
    std::printf("failures=%d\n", report.failures);
  }

  ordered_json cfg;
  cfg["gen"] = gen_to_json(gen);
  cfg["points"] = point_specs;
  cfg["reps"] = reps;
  cfg["fit_k"] = fit_k;
  cfg["max_iters"] = max_iters;
  cfg["tol"] = tol;
  cfg["n_init"] = n_init;
  cfg["d_ratio"] = d_ratio;
  cfg["fit_lambda"] = fit_lambda;
  cfg["methods"] = methods;
  finish_run(c, "experiment", cfg, artifacts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coreset construction and mixture fitting for panel time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsc::kVersion));

  // generate
  auto* g = app.add_subcommand("generate", "Sample a synthetic dataset");
  CommonOpts gc;
  std::string g_preset, g_init = "stationary", g_out = "dataset.csv";
  std::string g_truth, g_format = "text";
  int g_n = 100, g_t = 100, g_d = 1, g_k = 1;
  double g_lambda = 0.01;
  g->add_option("--preset", g_preset,
                "Named scenario: synthetic1, synthetic2, desk");
  g->add_option("--n", g_n, "Number of entities");
  g->add_option("--t", g_t, "Series length per entity");
  g->add_option("--d", g_d, "Observation dimension");
  g->add_option("--k", g_k, "Number of mixture components");
  g->add_option("--lambda", g_lambda, "Spread bound in (0,1]");
  g->add_option("--init", g_init, "Error start: stationary or zero");
  g->add_option("--out", g_out, "Dataset output path");
  g->add_option("--truth-out", g_truth, "Also write planted params + labels");
  g->add_option("--format", g_format, "Dataset encoding: text or bin");
  add_common(g, gc);

  // coreset
  auto* s = app.add_subcommand("coreset", "Build a weighted subsample");
  CommonOpts sc;
  std::string s_data, s_method = "crgmm", s_out = "coreset.json";
  int s_m = 0, s_l = 0, s_k = 1;
  double s_dr = 1.0, s_lambda = 0.25;
  s->add_option("--data", s_data, "Dataset path")->required();
  s->add_option("--method", s_method, "crgmm, uni, or lfkf");
  s->add_option("--m", s_m, "Entities to draw")->required();
  s->add_option("--l", s_l, "Time points per kept entity")->required();
  s->add_option("--k", s_k, "Cluster count for the score stage");
  s->add_option("--d-ratio", s_dr, "Cross-component covariance ratio bound");
  s->add_option("--lambda", s_lambda, "Spread bound in (0,1]");
  s->add_option("--out", s_out, "Coreset output path");
  add_common(s, sc);

  // fit
  auto* f = app.add_subcommand("fit", "Fit mixture parameters");
  CommonOpts fco;
  std::string f_data, f_coreset, f_out = "params.json";
  int f_k = 1, f_iters = 100, f_ninit = 1;
  double f_tol = 1e-6, f_dr = 1.0, f_lambda = 0.25;
  f->add_option("--data", f_data, "Dataset path")->required();
  f->add_option("--coreset", f_coreset, "Optional coreset path");
  f->add_option("--k", f_k, "Number of mixture components");
  f->add_option("--max-iters", f_iters, "Iteration cap");
  f->add_option("--tol", f_tol, "Relative objective tolerance");
  f->add_option("--n-init", f_ninit, "Random restarts");
  f->add_option("--d-ratio", f_dr, "Cross-component covariance ratio bound");
  f->add_option("--lambda", f_lambda, "Spread bound in (0,1]");
  f->add_option("--out", f_out, "Params output path");
  add_common(f, fco);

  // eval
  auto* e = app.add_subcommand("eval", "Score params on a dataset");
  CommonOpts ec;
  std::string e_data, e_params, e_ref, e_out;
  e->add_option("--data", e_data, "Dataset path")->required();
  e->add_option("--params", e_params, "Params path")->required();
  e->add_option("--reference", e_ref,
                "Reference params (enables the likelihood-ratio stat)");
  e->add_option("--out", e_out, "Optional metrics JSON path");
  add_common(e, ec);

  // experiment
  auto* x = app.add_subcommand("experiment",
                               "Generate, subsample, fit, and compare methods");
  CommonOpts xc;
  std::string x_preset, x_init = "stationary";
  int x_n = 100, x_t = 100, x_d = 1, x_k = 1;
  double x_lambda = 0.01;
  std::vector<std::string> x_points;
  int x_reps = 5, x_fit_k = 1, x_iters = 100, x_ninit = 1;
  double x_tol = 1e-6, x_dr = 1.0, x_fit_lambda = 0.25;
  std::vector<std::string> x_methods = {"crgmm", "uniform", "pooled"};
  std::string x_json = "report.json", x_csv = "report.csv";
  bool x_timings = false;
  x->add_option("--preset", x_preset,
                "Named scenario: synthetic1, synthetic2, desk");
  x->add_option("--n", x_n, "Number of entities");
  x->add_option("--t", x_t, "Series length per entity");
  x->add_option("--d", x_d, "Observation dimension");
  x->add_option("--k", x_k, "Generator mixture components");
  x->add_option("--lambda", x_lambda, "Generator spread bound");
  x->add_option("--init", x_init, "Error start: stationary or zero");
  x->add_option("--point", x_points,
                "Size point as EPSILON:MxL (repeatable)")
      ->required();
  x->add_option("--reps", x_reps, "Repetitions per point");
  x->add_option("--fit-k", x_fit_k, "Mixture components to fit");
  x->add_option("--max-iters", x_iters, "Fit iteration cap");
  x->add_option("--tol", x_tol, "Fit tolerance");
  x->add_option("--n-init", x_ninit, "Fit restarts");
  x->add_option("--d-ratio", x_dr, "Covariance ratio bound for scoring");
  x->add_option("--fit-lambda", x_fit_lambda, "Spread bound for scoring/fit");
  x->add_option("--methods", x_methods, "Subset of crgmm uniform pooled");
  x->add_option("--out-json", x_json, "Report JSON path");
  x->add_option("--out-csv", x_csv, "Report CSV path");
  x->add_flag("--timings", x_timings,
              "Include wall-clock fields in report files (breaks "
              "byte-for-byte reproducibility)");
  add_common(x, xc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);  // prints usage or the error message
    return code == 0 ? 0 : 2;
  }

  try {
    CommonOpts* active = nullptr;
    if (g->parsed()) active = &gc;
    if (s->parsed()) active = &sc;
    if (f->parsed()) active = &fco;
    if (e->parsed()) active = &ec;
    if (x->parsed()) active = &xc;
    if (active != nullptr) tsc::set_thread_count(active->threads);

    if (g->parsed()) {
      return run_generate(g, gc, g_preset, g_n, g_t, g_d, g_k, g_lambda,
                          g_init, g_out, g_truth, g_format);
    }
    if (s->parsed()) {
      return run_coreset(sc, s_data, s_method, s_m, s_l, s_k, s_dr, s_lambda,
                         s_out);
    }
    if (f->parsed()) {
      return run_fit(fco, f_data, f_coreset, f_k, f_iters, f_tol, f_ninit,
                     f_dr, f_lambda, f_out);
    }
    if (e->parsed()) {
      return run_eval(ec, e_data, e_params, e_ref, e_out);
    }
    if (x->parsed()) {
      return run_experiment(x, xc, x_preset, x_n, x_t, x_d, x_k, x_lambda,
                            x_init, x_points, x_reps, x_fit_k, x_iters, x_tol,
                            x_ninit, x_dr, x_fit_lambda, x_methods, x_json,
                            x_csv, x_timings);
    }
  } catch (const CLI::ValidationError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
