#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "krig/errors.hpp"
#include "krig/oracle.hpp"

using namespace krig;
using test::p1;
using test::pts1;

TEST_CASE("oracle reproduces the counter-example") {
  const Kernel k = Kernel::brownian();
  const auto x_all = pts1({0.5, 1.0});
  const std::vector<double> z_all = {1.0, 2.0};

  const oracle::RefitPrediction pred = oracle::refit_predict(k, x_all, z_all, p1(0.75));
  CHECK(pred.variance == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(pred.mean == doctest::Approx(1.5).epsilon(1e-14));

  const oracle::FullWeights w = oracle::full_weights(k, x_all, 0, p1(0.75));
  REQUIRE(w.lambda_old.size() == 0);
  REQUIRE(w.lambda_new.size() == 2);
  CHECK(w.lambda_new[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(w.lambda_new[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("oracle prior case and single observation") {
  const Kernel k = Kernel::brownian();
  const oracle::RefitPrediction prior =
      oracle::refit_predict(k, std::vector<Point>{}, std::vector<double>{}, p1(0.75));
  CHECK(prior.mean == 0.0);
  CHECK(prior.variance == 0.75);

  const oracle::RefitPrediction at_obs =
      oracle::refit_predict(k, pts1({0.6}), std::vector<double>{1.4}, p1(0.6));
  CHECK(at_obs.mean == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(std::abs(at_obs.variance) <= 1e-14);
}

TEST_CASE("full weights give a unit weight at an observed point") {
  const Kernel k = Kernel::squared_exponential(1.0, 0.4);
  std::mt19937_64 rng(31);
  const auto x_all = test::random_points(5, 2, rng);
  const oracle::FullWeights w = oracle::full_weights(k, x_all, 3, x_all[4], 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(w.lambda_old[i]) <= 1e-9);
  CHECK(w.lambda_new[0] == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
  CHECK(w.lambda_new[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("oracle self-consistency: mean equals weights dot observations") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Kernel k = Kernel::matern52(1.0, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x_all = test::random_points(7, 2, rng);
    std::vector<double> z(7);
    for (double& v : z) v = normal(rng);
    const Point q = test::random_points(1, 2, rng)[0];

    const oracle::RefitPrediction pred = oracle::refit_predict(k, x_all, z, q);
    const oracle::FullWeights w = oracle::full_weights(k, x_all, 3, q);
    double mean = 0.0;
    for (std::size_t i = 0; i < 3; ++i) mean += w.lambda_old[i] * z[i];
    for (std::size_t i = 0; i < 4; ++i) mean += w.lambda_new[i] * z[3 + i];
    CHECK(std::abs(mean - pred.mean) <= 1e-10 * (1.0 + std::abs(pred.mean)));
  }
}

TEST_CASE("full weights satisfy the full gram system") {
  std::mt19937_64 rng(41);
  const Kernel k = Kernel::squared_exponential(1.0, 0.5);
  const auto x_all = test::random_points(6, 1, rng);
  const Point q = test::random_points(1, 1, rng)[0];
  const oracle::FullWeights w = oracle::full_weights(k, x_all, 4, q);

  std::vector<double> lambda = w.lambda_old;
  lambda.insert(lambda.end(), w.lambda_new.begin(), w.lambda_new.end());
  const CovMatrix g = gram(k, x_all);
  const std::vector<double> lhs = test::matvec(g, lambda);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(std::abs(lhs[i] - eval(k, x_all[i], q)) <= 1e-9);
}

TEST_CASE("oracle is deterministic") {
  const Kernel k = Kernel::matern52(1.0, 0.3);
  const auto x_all = pts1({0.1, 0.4, 0.9});
  const std::vector<double> z = {0.3, -1.2, 0.8};
  const Point q = p1(0.6);
  const Point y = p1(0.2);
  const oracle::RefitPrediction a = oracle::refit_predict(k, x_all, z, q, &y);
  const oracle::RefitPrediction b = oracle::refit_predict(k, x_all, z, q, &y);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(*a.covariance == *b.covariance);
}

TEST_CASE("oracle propagates factorization failure") {
  const Kernel k = Kernel::brownian();
  CHECK_THROWS_AS(
      oracle::refit_predict(k, pts1({0.5, 0.5}), std::vector<double>{1.0, 1.0}, p1(0.75)),
      NotPositiveDefinite);
}
