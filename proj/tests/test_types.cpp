#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tsc/types.hpp"

using namespace tsc;

namespace {

EntitySeries make_series(int id, const Matrix& obs) {
  EntitySeries e;
  e.id = id;
  e.observations = obs;
  return e;
}

}  // namespace

TEST_SUITE("types") {

TEST_CASE("model bounds validate their ranges") {
  ModelBounds b;
  b.d_ratio = 1.0;
  b.lambda = 0.25;
  CHECK_NOTHROW(b.validate());
  CHECK(b.max_ar() == doctest::Approx(0.5));

  b.lambda = 1.0;
  CHECK(b.max_ar() == doctest::Approx(0.0));

  b.lambda = 0.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b.lambda = 1.5;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b.lambda = 0.25;
  b.d_ratio = 0.5;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("component caches a consistent inverse and log determinant") {
  Matrix sigma(2, 2);
  sigma << 2.0, 0.0, 0.0, 3.0;
  Component c(Vector::Zero(2), sigma, Vector::Zero(2));
  CHECK((c.sigma_inv() * c.sigma() - Matrix::Identity(2, 2)).norm() <
        1e-12);
  CHECK(c.log_det_sigma() == doctest::Approx(std::log(6.0)));
  // d-dimensional gaussian normalizer at d=1, unit variance
  Component u(Vector::Zero(1), Matrix::Identity(1, 1), Vector::Zero(1));
  CHECK(u.log_normalizer() ==
        doctest::Approx(0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("component symmetrizes mildly asymmetric covariance input") {
  Matrix sigma(2, 2);
  sigma << 1.0, 0.3, 0.1, 1.0;
  Component c(Vector::Zero(2), sigma, Vector::Zero(2));
  CHECK(c.sigma()(0, 1) == doctest::Approx(0.2));
  CHECK(c.sigma()(1, 0) == doctest::Approx(0.2));
}

TEST_CASE("component rejects invalid covariance or ar input") {
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(Component(Vector::Zero(2), bad, Vector::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Component(Vector::Zero(1), Matrix::Identity(1, 1),
                            Vector::Constant(1, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Component(Vector::Zero(1), Matrix::Identity(1, 1),
                            Vector::Constant(1, -0.1)),
                  std::invalid_argument);
}

TEST_CASE("mixture params validate the simplex and shapes") {
  MixtureParams p;
  p.alpha = Vector::Constant(2, 0.5);
  p.components.emplace_back(Vector::Zero(1), Matrix::Identity(1, 1),
                            Vector::Zero(1));
  p.components.emplace_back(Vector::Ones(1), Matrix::Identity(1, 1),
                            Vector::Constant(1, 0.4));
  CHECK_NOTHROW(p.validate());

  ModelBounds b;
  b.lambda = 0.25;  // ar cap 0.5
  CHECK_NOTHROW(p.validate(b));
  b.lambda = 0.49;  // ar cap 0.3 < 0.4
  CHECK_THROWS_AS(p.validate(b), std::invalid_argument);

  p.alpha[0] = 0.4;  // sums to 0.9
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("series accessor is one-based") {
  Matrix obs(2, 2);
  obs << 1.0, 2.0, 3.0, 4.0;
  const EntitySeries e = make_series(0, obs);
  CHECK(e.length() == 2);
  CHECK(e.dim() == 2);
  CHECK(e.at(1)[0] == 1.0);
  CHECK(e.at(1)[1] == 2.0);
  CHECK(e.at(2)[0] == 3.0);
  CHECK(e.at(2)[1] == 4.0);
}

TEST_CASE("dataset requires dense ordered entity ids") {
  TimeSeriesDataset data;
  data.entities.push_back(make_series(0, Matrix::Ones(2, 1)));
  data.entities.push_back(make_series(2, Matrix::Ones(2, 1)));
  CHECK_THROWS_AS(data.validate(), std::invalid_argument);
  data.entities[1].id = 1;
  CHECK_NOTHROW(data.validate());
  CHECK(data.total_observations() == 4);
}

TEST_CASE("identity coreset covers every pair with unit weight") {
  TimeSeriesDataset data;
  data.entities.push_back(make_series(0, Matrix::Ones(3, 1)));
  data.entities.push_back(make_series(1, Matrix::Ones(2, 1)));
  const Coreset s = identity_coreset(data);
  CHECK(s.pair_count() == 5);
  CHECK_NOTHROW(s.validate(data));
  for (int id : s.entity_ids) {
    CHECK(s.entity_weights.at(id) == 1.0);
    for (int t : s.time_indices.at(id)) {
      CHECK(s.time_weights.at(id).at(t) == 1.0);
    }
  }
}

TEST_CASE("coreset validation catches dangling references") {
  TimeSeriesDataset data;
  data.entities.push_back(make_series(0, Matrix::Ones(3, 1)));
  Coreset s = identity_coreset(data);

  Coreset bad_entity = s;
  bad_entity.entity_ids.push_back(7);
  bad_entity.entity_weights[7] = 1.0;
  bad_entity.time_indices[7] = {1};
  bad_entity.time_weights[7][1] = 1.0;
  CHECK_THROWS_AS(bad_entity.validate(data), std::invalid_argument);

  Coreset bad_time = s;
  bad_time.time_indices[0].push_back(4);  // series length is 3
  bad_time.time_weights[0][4] = 1.0;
  CHECK_THROWS_AS(bad_time.validate(data), std::invalid_argument);

  Coreset missing_weight = s;
  missing_weight.entity_weights.erase(0);
  CHECK_THROWS_AS(missing_weight.validate(data), std::invalid_argument);
}

}  // TEST_SUITE
