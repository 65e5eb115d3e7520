#include <doctest.h>

#include "properties.hpp"

TEST_CASE("scaling both costs leaves every threshold unchanged [property]") {
  const auto r = fctest::cost_scaling_invariance(401);
  INFO(r.first_failure);
  CHECK(r.cases >= 1000);
  CHECK(r.ok());
}

TEST_CASE("genie never costs more than push or pull [property]") {
  const auto r = fctest::genie_lower_bound(402);
  INFO(r.first_failure);
  CHECK(r.cases >= 1000);
  CHECK(r.ok());
}

TEST_CASE("integer push optimum sits beside the continuous one [property]") {
  const auto r = fctest::push_argmin_near_continuous(403);
  INFO(r.first_failure);
  CHECK(r.cases >= 1000);
  CHECK(r.ok());
}

TEST_CASE("gain sign away from the crossover band [property]") {
  const auto r = fctest::reduction_sign(404);
  INFO(r.first_failure);
  CHECK(r.cases >= 1000);
  CHECK(r.ok());
}

TEST_CASE("catalog popularity sums to one [property]") {
  const auto r = fctest::catalog_normalized(405);
  INFO(r.first_failure);
  CHECK(r.cases >= 1000);
  CHECK(r.ok());
}
