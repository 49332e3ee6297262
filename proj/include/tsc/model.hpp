#pragma once

#include "tsc/types.hpp"

namespace tsc {

// Per-observation cost of entity series x under one component (t is
// 1-based). t = 1 charges the first residual minus the part explained by
// carrying it one step forward; t >= 2 charges the AR-whitened innovation.
double obs_cost(const EntitySeries& x, int t, const Component& c);

// Sum of obs_cost over t = 1..T_i.
double series_cost(const EntitySeries& x, const Component& c);

// Squared-distance cost sum_t ||x_t - mu||^2 (the AR-free surrogate).
double sq_dist_sum(const EntitySeries& x, const Vector& mu);

// Negative log-likelihood of one entity under the mixture: average-per-step
// exponent, full Gaussian normalizers, log-sum-exp over components.
// Components with alpha == 0 are skipped.
double entity_nll(const EntitySeries& x, const MixtureParams& p);

// Sum of entity_nll over the dataset (ascending entity order).
double total_nll(const TimeSeriesDataset& data, const MixtureParams& p);

// Normalizer-free negative log-likelihood: the mixing vector weighs raw
// exponentials exp(-series_cost/(2 T_i)) with no Gaussian normalizers.
double kernel_entity_nll(const EntitySeries& x, const MixtureParams& p);
double kernel_nll(const TimeSeriesDataset& data, const MixtureParams& p);

// Split of the total NLL into a kernel part and a data-independent offset:
//   total_nll(data, p) == kernel (evaluated at the reweighted mixing `coef`)
//                         + offset
// coef folds each component's normalizer into the mixing weights and
// renormalizes; offset is N times the log of that normalizing constant.
struct NllSplit {
  double kernel = 0.0;
  double offset = 0.0;
  Vector coef;
};
NllSplit normalized_nll(const TimeSeriesDataset& data, const MixtureParams& p);

// Kernel NLL evaluated on a weighted coreset: outer entity weights scale
// each kept entity's term; inner time weights scale the per-step costs
// inside the exponent. The divisor stays the full series length T_i.
// On the identity coreset this equals kernel_nll exactly.
double coreset_kernel_nll(const TimeSeriesDataset& data, const Coreset& s,
                          const MixtureParams& p);

// Largest ratio of covariance condition numbers across component pairs
// (>= 1); the realized value of the bound ModelBounds.d_ratio promises.
double condition_ratio(const MixtureParams& p);

}  // namespace tsc
