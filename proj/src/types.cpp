#include "tsc/types.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace tsc {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

double ModelBounds::max_ar() const { return 1.0 - std::sqrt(lambda); }

void ModelBounds::validate() const {
  require(std::isfinite(d_ratio) && d_ratio >= 1.0, "d_ratio must be >= 1");
  require(std::isfinite(lambda) && lambda > 0.0 && lambda < 1.0,
          "lambda must lie in (0, 1)");
}

Component::Component(Vector mu, Matrix sigma, Vector ar)
    : mu_(std::move(mu)), ar_(std::move(ar)) {
  const auto d = mu_.size();
  require(d >= 1, "component dimension must be >= 1");
  require(sigma.rows() == d && sigma.cols() == d, "sigma shape mismatch");
  require(ar_.size() == d, "ar diagonal shape mismatch");
  require(mu_.allFinite() && ar_.allFinite() && all_finite(sigma),
          "component parameters must be finite");
  for (Eigen::Index r = 0; r < d; ++r) {
    require(ar_[r] >= 0.0 && ar_[r] < 1.0, "ar entries must lie in [0, 1)");
  }
  sigma_ = 0.5 * (sigma + sigma.transpose());
  Eigen::LLT<Matrix> llt(sigma_);
  require(llt.info() == Eigen::Success, "sigma must be positive definite");
  sigma_inv_ = llt.solve(Matrix::Identity(d, d));
  log_det_ = 0.0;
  const Matrix& L = llt.matrixLLT();
  for (Eigen::Index r = 0; r < d; ++r) log_det_ += 2.0 * std::log(L(r, r));
  require(std::isfinite(log_det_), "sigma determinant underflowed");
}

double Component::log_normalizer() const {
  return 0.5 * dim() * std::log(2.0 * M_PI) + 0.5 * log_det_;
}

void MixtureParams::validate() const {
  require(!components.empty(), "mixture must have at least one component");
  require(alpha.size() == static_cast<Eigen::Index>(components.size()),
          "alpha size must match component count");
  double sum = 0.0;
  for (Eigen::Index l = 0; l < alpha.size(); ++l) {
    require(std::isfinite(alpha[l]) && alpha[l] >= 0.0,
            "alpha entries must be nonnegative");
    sum += alpha[l];
  }
  require(std::abs(sum - 1.0) <= 1e-9, "alpha must sum to 1");
  const int d = components.front().dim();
  for (const auto& c : components) {
    require(c.dim() == d, "components must share one dimension");
  }
}

void MixtureParams::validate(const ModelBounds& bounds) const {
  validate();
  bounds.validate();
  const double cap = bounds.max_ar() + 1e-12;
  for (const auto& c : components) {
    for (Eigen::Index r = 0; r < c.ar().size(); ++r) {
      require(c.ar()[r] <= cap, "ar entry exceeds 1 - sqrt(lambda)");
    }
  }
}

void EntitySeries::validate() const {
  require(observations.rows() >= 1, "series must have at least one step");
  require(observations.cols() >= 1, "series dimension must be >= 1");
  require(observations.allFinite(), "series must be finite");
}

std::int64_t TimeSeriesDataset::total_observations() const {
  std::int64_t n = 0;
  for (const auto& e : entities) n += e.length();
  return n;
}

void TimeSeriesDataset::validate() const {
  require(!entities.empty(), "dataset must have at least one entity");
  const int d = entities.front().dim();
  for (int i = 0; i < num_entities(); ++i) {
    require(entities[i].id == i, "entity ids must be dense 0..N-1 in order");
    require(entities[i].dim() == d, "entities must share one dimension");
    entities[i].validate();
  }
}

std::int64_t Coreset::pair_count() const {
  std::int64_t n = 0;
  for (const auto& [id, ts] : time_indices) n += static_cast<std::int64_t>(ts.size());
  return n;
}

void Coreset::validate(const TimeSeriesDataset& data) const {
  require(!entity_ids.empty(), "coreset must keep at least one entity");
  int prev = -1;
  for (int id : entity_ids) {
    require(id > prev, "coreset entity ids must be strictly ascending");
    prev = id;
    require(id >= 0 && id < data.num_entities(), "coreset entity id out of range");
    auto w = entity_weights.find(id);
    require(w != entity_weights.end() && std::isfinite(w->second) && w->second > 0.0,
            "each kept entity needs a positive weight");
    auto ts = time_indices.find(id);
    require(ts != time_indices.end() && !ts->second.empty(),
            "each kept entity needs time indices");
    auto tw = time_weights.find(id);
    require(tw != time_weights.end(), "each kept entity needs time weights");
    const int len = data.entities[id].length();
    int prev_t = 0;
    for (int t : ts->second) {
      require(t > prev_t, "time indices must be strictly ascending");
      prev_t = t;
      require(t >= 1 && t <= len, "time index out of range");
      auto u = tw->second.find(t);
      require(u != tw->second.end() && std::isfinite(u->second) && u->second > 0.0,
              "each kept step needs a positive weight");
    }
    require(tw->second.size() == ts->second.size(),
            "time weights must match time indices");
  }
  require(entity_weights.size() == entity_ids.size() &&
              time_indices.size() == entity_ids.size() &&
              time_weights.size() == entity_ids.size(),
          "coreset maps must cover exactly the kept entities");
}

Coreset identity_coreset(const TimeSeriesDataset& data) {
  Coreset s;
  s.entity_ids.reserve(data.entities.size());
  for (const auto& e : data.entities) {
    s.entity_ids.push_back(e.id);
    s.entity_weights[e.id] = 1.0;
    auto& ts = s.time_indices[e.id];
    auto& tw = s.time_weights[e.id];
    ts.reserve(e.length());
    for (int t = 1; t <= e.length(); ++t) {
      ts.push_back(t);
      tw[t] = 1.0;
    }
  }
  return s;
}

}  // namespace tsc
