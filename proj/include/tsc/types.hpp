#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Regularity bounds shared by the sampler and the fitter. `lambda` is the
// autocorrelation margin (AR coefficients stay at or below 1 - sqrt(lambda));
// `d_ratio` (>= 1) bounds how far apart component covariance conditioning can
// be across the mixture.
struct ModelBounds {
  double d_ratio = 1.0;
  double lambda = 0.25;

  double max_ar() const;
  void validate() const;  // throws std::invalid_argument
};

// One mixture component: mean mu, SPD covariance sigma, and a diagonal AR(1)
// transition encoded by its diagonal `ar` (entries in [0,1)). The covariance
// is symmetrized and Cholesky-factored once at construction; an invalid
// (non-SPD or non-finite) sigma throws.
class Component {
 public:
  Component(Vector mu, Matrix sigma, Vector ar);

  int dim() const { return static_cast<int>(mu_.size()); }
  const Vector& mu() const { return mu_; }
  const Matrix& sigma() const { return sigma_; }
  const Vector& ar() const { return ar_; }
  const Matrix& sigma_inv() const { return sigma_inv_; }
  double log_det_sigma() const { return log_det_; }
  // log of the Gaussian normalizer (2*pi)^(d/2) * det(sigma)^(1/2)
  double log_normalizer() const;

 private:
  Vector mu_;
  Matrix sigma_;
  Vector ar_;
  Matrix sigma_inv_;
  double log_det_ = 0.0;
};

struct MixtureParams {
  Vector alpha;
  std::vector<Component> components;

  int k() const { return static_cast<int>(components.size()); }
  int dim() const { return components.empty() ? 0 : components.front().dim(); }
  void validate() const;
  void validate(const ModelBounds& bounds) const;
};

// One entity's observed series, rows are time steps 1..T_i.
struct EntitySeries {
  int id = 0;
  Matrix observations;  // T_i x d

  int length() const { return static_cast<int>(observations.rows()); }
  int dim() const { return static_cast<int>(observations.cols()); }
  // Observation at 1-based time index t, as a column vector.
  Vector at(int t) const { return observations.row(t - 1).transpose(); }
  void validate() const;
};

struct TimeSeriesDataset {
  std::vector<EntitySeries> entities;

  int num_entities() const { return static_cast<int>(entities.size()); }
  int dim() const { return entities.empty() ? 0 : entities.front().dim(); }
  std::int64_t total_observations() const;
  void validate() const;  // ids dense 0..N-1 in order, equal dims, finite
};

// Weighted two-level sample: entity ids with weights, and per kept entity a
// set of 1-based time indices with weights. Duplicate draws are merged by
// summing weights, so ids and indices are unique and kept sorted.
struct Coreset {
  std::vector<int> entity_ids;                   // ascending
  std::map<int, double> entity_weights;          // id -> w(i)
  std::map<int, std::vector<int>> time_indices;  // id -> ascending t (1-based)
  std::map<int, std::map<int, double>> time_weights;

  std::int64_t pair_count() const;  // sum over kept entities of |J_i|
  void validate(const TimeSeriesDataset& data) const;
};

// Every-entity, every-time-step coreset with unit weights; evaluating or
// fitting on it must match the full-data path exactly.
Coreset identity_coreset(const TimeSeriesDataset& data);

}  // namespace tsc
