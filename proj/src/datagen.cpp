#include "tsc/datagen.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "tsc/rng.hpp"
#include "tsc/threading.hpp"

namespace tsc {

namespace {

void check(const GenConfig& c) {
  if (c.n_entities < 1 || c.series_len < 1 || c.d < 1 || c.k < 1) {
    throw std::invalid_argument("generator counts must be >= 1");
  }
  if (!(c.lambda > 0.0 && c.lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1)");
  }
}

Vector simplex_draw(int k, rng::Stream& stream) {
  Vector a(k);
  double sum = 0.0;
  for (int l = 0; l < k; ++l) {
    double u = stream.uniform01();
    if (u <= 0.0) u = 0x1.0p-53;
    a[l] = -std::log(u);
    sum += a[l];
  }
  return a / sum;
}

}  // namespace

GenConfig preset(const std::string& name) {
  GenConfig c;
  c.d = 2;
  c.k = 3;
  if (name == "synthetic1") {
    c.n_entities = 500;
    c.series_len = 500;
    c.lambda = 0.01;
  } else if (name == "synthetic2") {
    c.n_entities = 200;
    c.series_len = 1250;
    c.lambda = 0.01;
  } else if (name == "desk") {
    c.n_entities = 200;
    c.series_len = 200;
    c.lambda = 0.25;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return c;
}

MixtureParams draw_params(const GenConfig& config) {
  check(config);
  rng::Stream stream(config.seed, rng::Stage::GenParams, 0);
  const int d = config.d;

  MixtureParams p;
  p.alpha = simplex_draw(config.k, stream);
  for (int l = 0; l < config.k; ++l) {
    Vector mu(d);
    for (int r = 0; r < d; ++r) mu[r] = stream.normal();

    Matrix gram = Matrix::Identity(d, d);
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      Matrix a(d, d);
      for (int r = 0; r < d; ++r) {
        for (int q = 0; q < d; ++q) a(r, q) = stream.uniform01();
      }
      Matrix g = a * a.transpose();
      Eigen::LLT<Matrix> llt(g);
      double det = 1.0;
      if (llt.info() == Eigen::Success) {
        const Matrix& lm = llt.matrixLLT();
        for (int r = 0; r < d; ++r) det *= lm(r, r) * lm(r, r);
      }
      if (llt.info() == Eigen::Success && det > 1e-10) {
        gram = g;
        ok = true;
      }
    }
    const Matrix sigma =
        Eigen::LLT<Matrix>(gram).solve(Matrix::Identity(d, d));

    Vector ar(d);
    const double cap = 1.0 - std::sqrt(config.lambda);
    for (int r = 0; r < d; ++r) ar[r] = stream.uniform(0.0, cap);

    p.components.emplace_back(mu, sigma, ar);
  }
  return p;
}

std::pair<TimeSeriesDataset, GroundTruth> generate_from(
    const GenConfig& config, const MixtureParams& params) {
  check(config);
  params.validate();
  if (params.k() != config.k || params.dim() != config.d) {
    throw std::invalid_argument("parameter shape does not match config");
  }

  std::vector<Matrix> chol(params.components.size());
  for (std::size_t l = 0; l < params.components.size(); ++l) {
    chol[l] = Eigen::LLT<Matrix>(params.components[l].sigma()).matrixL();
  }
  std::vector<double> alpha(params.alpha.data(),
                            params.alpha.data() + params.alpha.size());

  TimeSeriesDataset data;
  data.entities.resize(static_cast<std::size_t>(config.n_entities));
  GroundTruth truth;
  truth.params = params;
  truth.labels.assign(static_cast<std::size_t>(config.n_entities), 0);

  parallel_for(static_cast<std::size_t>(config.n_entities), [&](std::size_t i) {
    rng::Stream stream(config.seed, rng::Stage::GenSeries,
                       static_cast<std::uint64_t>(i));
    const int l = static_cast<int>(stream.categorical(alpha));
    truth.labels[i] = l;
    const Component& c = params.components[static_cast<std::size_t>(l)];
    const int d = config.d;

    EntitySeries& series = data.entities[i];
    series.id = static_cast<int>(i);
    series.observations.resize(config.series_len, d);

    // Pre-sample error state e_0, then the AR recursion for t = 1..T.
    Vector err = Vector::Zero(d);
    if (config.init == ErrorInit::Stationary) {
      for (int r = 0; r < d; ++r) {
        const double var = c.sigma()(r, r) / (1.0 - c.ar()[r] * c.ar()[r]);
        err[r] = std::sqrt(var) * stream.normal();
      }
    }
    for (int t = 0; t < config.series_len; ++t) {
      Vector z(d);
      for (int r = 0; r < d; ++r) z[r] = stream.normal();
      err = c.ar().cwiseProduct(err) + chol[static_cast<std::size_t>(l)] * z;
      series.observations.row(t) = (c.mu() + err).transpose();
    }
  });
  return {std::move(data), std::move(truth)};
}

std::pair<TimeSeriesDataset, GroundTruth> generate(const GenConfig& config) {
  return generate_from(config, draw_params(config));
}

}  // namespace tsc
