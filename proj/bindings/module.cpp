#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsc/coreset.hpp"
#include "tsc/datagen.hpp"
#include "tsc/em.hpp"
#include "tsc/eval.hpp"
#include "tsc/model.hpp"
#include "tsc/threading.hpp"
#include "tsc/version.hpp"

namespace py = pybind11;

namespace {

tsc::TimeSeriesDataset dataset_from_arrays(
    const std::vector<Eigen::MatrixXd>& series) {
  tsc::TimeSeriesDataset data;
  data.entities.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    data.entities[i].id = static_cast<int>(i);
    data.entities[i].observations = series[i];
  }
  data.validate();
  return data;
}

std::vector<Eigen::MatrixXd> dataset_to_arrays(
    const tsc::TimeSeriesDataset& data) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(data.entities.size());
  for (const auto& e : data.entities) out.push_back(e.observations);
  return out;
}

tsc::ModelBounds make_bounds(double d_ratio, double lambda) {
  tsc::ModelBounds b;
  b.d_ratio = d_ratio;
  b.lambda = lambda;
  b.validate();
  return b;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Coreset construction and mixture fitting for panel time-series data";
  m.attr("__version__") = tsc::kVersion;

  py::class_<tsc::Component>(m, "Component")
      .def(py::init<tsc::Vector, tsc::Matrix, tsc::Vector>(), py::arg("mu"),
           py::arg("sigma"), py::arg("ar"))
      .def_property_readonly("mu", &tsc::Component::mu)
      .def_property_readonly("sigma", &tsc::Component::sigma)
      .def_property_readonly("ar", &tsc::Component::ar)
      .def_property_readonly("dim", &tsc::Component::dim);

  py::class_<tsc::MixtureParams>(m, "MixtureParams")
      .def(py::init([](const tsc::Vector& alpha,
                       const std::vector<tsc::Component>& components) {
             tsc::MixtureParams p;
             p.alpha = alpha;
             p.components = components;
             p.validate();
             return p;
           }),
           py::arg("alpha"), py::arg("components"))
      .def_property_readonly(
          "alpha", [](const tsc::MixtureParams& p) { return p.alpha; })
      .def_property_readonly(
          "components",
          [](const tsc::MixtureParams& p) { return p.components; })
      .def_property_readonly("k", &tsc::MixtureParams::k)
      .def_property_readonly("dim", &tsc::MixtureParams::dim);

  py::class_<tsc::Coreset>(m, "Coreset")
      .def_readonly("entity_ids", &tsc::Coreset::entity_ids)
      .def_readonly("entity_weights", &tsc::Coreset::entity_weights)
      .def_readonly("time_indices", &tsc::Coreset::time_indices)
      .def_readonly("time_weights", &tsc::Coreset::time_weights)
      .def_property_readonly("pair_count", &tsc::Coreset::pair_count);

  m.def("set_thread_count", &tsc::set_thread_count, py::arg("n"));

  m.def(
      "generate",
      [](int n, int t, int d, int k, double lambda, std::uint64_t seed,
         const std::string& init) {
        tsc::GenConfig cfg;
        cfg.n_entities = n;
        cfg.series_len = t;
        cfg.d = d;
        cfg.k = k;
        cfg.lambda = lambda;
        cfg.seed = seed;
        cfg.init = init == "zero" ? tsc::ErrorInit::Zero
                                  : tsc::ErrorInit::Stationary;
        auto [data, truth] = tsc::generate(cfg);
        return py::make_tuple(dataset_to_arrays(data), truth.params,
                              truth.labels);
      },
      py::arg("n"), py::arg("t"), py::arg("d") = 1, py::arg("k") = 1,
      py::arg("lam") = 0.01, py::arg("seed") = 0,
      py::arg("init") = "stationary",
      "Sample a synthetic dataset; returns (series_list, params, labels)");

  m.def(
      "build_coreset",
      [](const std::vector<Eigen::MatrixXd>& series, int m_entities,
         int l_times, int k, std::uint64_t seed, double d_ratio,
         double lambda) {
        tsc::SamplerConfig cfg;
        cfg.m_entities = m_entities;
        cfg.l_times = l_times;
        cfg.k = k;
        cfg.seed = seed;
        cfg.bounds = make_bounds(d_ratio, lambda);
        return tsc::build_coreset(dataset_from_arrays(series), cfg).coreset;
      },
      py::arg("series"), py::arg("m_entities"), py::arg("l_times"),
      py::arg("k") = 1, py::arg("seed") = 0, py::arg("d_ratio") = 1.0,
      py::arg("lam") = 0.25,
      "Two-stage importance-sampled coreset of (entity, time) pairs");

  m.def(
      "uniform_coreset",
      [](const std::vector<Eigen::MatrixXd>& series, long long budget,
         std::uint64_t seed) {
        return tsc::uniform_baseline(dataset_from_arrays(series), budget,
                                     seed);
      },
      py::arg("series"), py::arg("budget"), py::arg("seed") = 0);

  m.def(
      "pooled_coreset",
      [](const std::vector<Eigen::MatrixXd>& series, long long budget, int k,
         std::uint64_t seed) {
        return tsc::pooled_baseline(dataset_from_arrays(series), budget, k,
                                    seed);
      },
      py::arg("series"), py::arg("budget"), py::arg("k") = 1,
      py::arg("seed") = 0);

  m.def(
      "fit",
      [](const std::vector<Eigen::MatrixXd>& series,
         const std::optional<tsc::Coreset>& coreset, int k, int max_iters,
         double tol, int n_init, std::uint64_t seed, double d_ratio,
         double lambda) {
        tsc::FitConfig cfg;
        cfg.k = k;
        cfg.max_iters = max_iters;
        cfg.tol = tol;
        cfg.n_init = n_init;
        cfg.seed = seed;
        cfg.bounds = make_bounds(d_ratio, lambda);
        const tsc::FitResult res =
            tsc::fit(dataset_from_arrays(series),
                     coreset ? &*coreset : nullptr, cfg, std::nullopt);
        return py::make_tuple(res.params, res.objective, res.trace);
      },
      py::arg("series"), py::arg("coreset") = py::none(), py::arg("k") = 1,
      py::arg("max_iters") = 100, py::arg("tol") = 1e-6,
      py::arg("n_init") = 1, py::arg("seed") = 0, py::arg("d_ratio") = 1.0,
      py::arg("lam") = 0.25,
      "Weighted mixture fit; returns (params, full_data_objective, trace)");

  m.def(
      "total_nll",
      [](const std::vector<Eigen::MatrixXd>& series,
         const tsc::MixtureParams& p) {
        return tsc::total_nll(dataset_from_arrays(series), p);
      },
      py::arg("series"), py::arg("params"),
      "Summed per-entity negative log average likelihood");

  m.def(
      "coreset_kernel_nll",
      [](const std::vector<Eigen::MatrixXd>& series, const tsc::Coreset& s,
         const tsc::MixtureParams& p) {
        return tsc::coreset_kernel_nll(dataset_from_arrays(series), s, p);
      },
      py::arg("series"), py::arg("coreset"), py::arg("params"));

  m.def(
      "theoretical_sizes",
      [](double epsilon, int k, int d, double d_ratio, double lambda,
         double c_entity, double c_time) {
        tsc::TheoreticalSizes s = tsc::theoretical_sizes(
            epsilon, k, d, make_bounds(d_ratio, lambda), c_entity, c_time);
        return py::make_tuple(s.m_entities, s.l_times);
      },
      py::arg("epsilon"), py::arg("k"), py::arg("d"), py::arg("d_ratio") = 1.0,
      py::arg("lam") = 0.25, py::arg("c_entity") = 1.0,
      py::arg("c_time") = 1.0,
      "Sample counts (entity stage, time stage) from the accuracy bound");

  m.def(
      "condition_ratio",
      [](const tsc::MixtureParams& p) { return tsc::condition_ratio(p); },
      py::arg("params"),
      "Largest cross-component covariance eigenvalue ratio");

  m.def(
      "align_components",
      [](const tsc::MixtureParams& fitted, const tsc::MixtureParams& ref) {
        return tsc::align_components(fitted, ref);
      },
      py::arg("fitted"), py::arg("reference"));

  m.def(
      "aligned_mean_error",
      [](const tsc::MixtureParams& fitted, const tsc::MixtureParams& ref) {
        return tsc::aligned_mean_error(fitted, ref);
      },
      py::arg("fitted"), py::arg("reference"));
}
