#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "krig/verify.hpp"

using namespace krig;

TEST_CASE("instances are reproducible from their seed") {
  const verify::InstanceConfig cfg{Kernel::matern52(1.0, 0.4), 5, 2, 2, 1e-10, 20, 1234};
  const verify::Instance a = verify::make_instance(cfg);
  const verify::Instance b = verify::make_instance(cfg);
  REQUIRE(a.x_old.size() == 5);
  REQUIRE(a.x_new.size() == 2);
  REQUIRE(a.queries.size() == 20);
  for (std::size_t i = 0; i < 5; ++i) CHECK(a.x_old[i].coords == b.x_old[i].coords);
  CHECK(a.z_old == b.z_old);
  CHECK(a.z_new == b.z_new);
}

TEST_CASE("instance designs keep a minimum separation") {
  const verify::InstanceConfig cfg{Kernel::squared_exponential(1.0, 0.3), 12, 4, 1, 1e-5, 5, 99};
  const verify::Instance inst = verify::make_instance(cfg);
  std::vector<Point> all = inst.x_old;
  all.insert(all.end(), inst.x_new.begin(), inst.x_new.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      CHECK(std::abs(all[i].coords[0] - all[j].coords[0]) >= 0.02 - 1e-12);
}

TEST_CASE("brownian instances stay on the positive axis") {
  const verify::InstanceConfig cfg{Kernel::brownian(), 6, 2, 1, 0.0, 5, 7};
  const verify::Instance inst = verify::make_instance(cfg);
  for (const Point& p : inst.x_old) CHECK(p.coords[0] >= 0.05);
  CHECK_THROWS_AS(
      verify::make_instance(verify::InstanceConfig{Kernel::brownian(), 2, 1, 3, 0.0, 5, 7}),
      std::invalid_argument);
}

TEST_CASE("stability floor applies to squared-exponential in d = 1 only") {
  CHECK(verify::stability_jitter_floor(Kernel::squared_exponential(1.0, 0.3), 1) == 1e-4);
  CHECK(verify::stability_jitter_floor(Kernel::squared_exponential(1.0, 0.3), 3) == 0.0);
  CHECK(verify::stability_jitter_floor(Kernel::matern52(1.0, 0.3), 1) == 0.0);
  CHECK(verify::stability_jitter_floor(Kernel::brownian(), 1) == 0.0);
}

TEST_CASE("suites pass on a small mixed grid") {
  const std::vector<verify::Instance> instances =
      verify::make_grid(Kernel::matern52(1.0, 0.4), {0, 4}, {1, 3}, {1, 2}, 2, 1e-10, 2024);
  REQUIRE(instances.size() == 16);

  const verify::SuiteResult oracle_eq = verify::suite_oracle_equivalence(instances);
  CHECK(oracle_eq.pass);
  CHECK(oracle_eq.max_err <= verify::kTolOracle);
  CHECK(oracle_eq.checks == 16 * 20 * 6);

  CHECK(verify::suite_prop2(instances).pass);
  CHECK(verify::suite_total_variance(instances).pass);
  CHECK(verify::suite_emery_gap(instances).pass);
  CHECK(verify::suite_diagonal_coincidence(instances).pass);

  const verify::SuiteResult k1 = verify::suite_k1_collapse(instances);
  CHECK(k1.pass);
  CHECK(k1.instances == 8);  // only the k = 1 half participates
}

TEST_CASE("k1 collapse suite notes an empty grid") {
  const std::vector<verify::Instance> instances =
      verify::make_grid(Kernel::matern52(1.0, 0.4), {3}, {2}, {1}, 1, 0.0, 5);
  const verify::SuiteResult r = verify::suite_k1_collapse(instances);
  CHECK(r.pass);
  CHECK(r.instances == 0);
  CHECK(!r.note.empty());
}

TEST_CASE("rel_err uses a unit floor") {
  CHECK(verify::rel_err(1.0, 1.0) == 0.0);
  CHECK(verify::rel_err(2.0, 1.0) == 0.5);
  CHECK(verify::rel_err(1e-12, 0.0) == 1e-12);
}
