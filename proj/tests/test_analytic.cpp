#include <doctest.h>

#include <cmath>

#include "freshcache/analytic.hpp"
#include "freshcache/error.hpp"
#include "support.hpp"

using namespace freshcache;
using fctest::Point;

namespace {
const Point kRunning{1.0, 2.0, 1.0, 0.1};
const Point kSquare{1.0, 0.8, 1.0, 0.1};
}  // namespace

TEST_CASE("push cycle cost at the running example") {
  const double expected = fctest::ref_push_cost(6, kRunning);
  CHECK(expected == doctest::Approx(0.5833333333333333));
  CHECK(push_cycle_cost(6, kRunning.item(), kRunning.beta(), kRunning.costs()) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(push_cycle_cost(1, kRunning.item(), kRunning.beta(), kRunning.costs()) == doctest::Approx(2.0));
  CHECK(push_cycle_cost(4, kSquare.item(), kSquare.beta(), kSquare.costs()) == doctest::Approx(0.35));
  CHECK_THROWS_AS(push_cycle_cost(0, kRunning.item(), 1.0, kRunning.costs()), DomainError);
}

TEST_CASE("push optimum matches exhaustive search") {
  for (const auto& x : {kRunning, kSquare}) {
    const auto ref = fctest::ref_push_argmin(x, 10000);
    const auto sol = push_optimal(x.item(), x.beta(), x.costs());
    REQUIRE(sol.cycle_length);
    CHECK(*sol.cycle_length == ref.m);
    CHECK(sol.cost == doctest::Approx(ref.cost).epsilon(1e-14));
    CHECK_FALSE(sol.degenerate());
  }
  CHECK(*push_optimal(kRunning.item(), 1.0, kRunning.costs()).cycle_length == 6);
  CHECK(*push_optimal(kSquare.item(), 1.0, kSquare.costs()).cycle_length == 4);
}

TEST_CASE("perfect square push cost equals the relaxed formula") {
  const auto sol = push_optimal(kSquare.item(), kSquare.beta(), kSquare.costs());
  CHECK(sol.cost == doctest::Approx(push_relaxed_cost(kSquare.item(), kSquare.beta(), kSquare.costs())).epsilon(1e-14));
  CHECK(sol.cost == doctest::Approx(0.4 - 0.05));
}

TEST_CASE("push degenerate cases") {
  const CostParams costs{1.0, 0.1};
  const auto static_item = push_optimal({1.0, 0.0}, 5.0, costs);
  CHECK(static_item.degeneracy == Degeneracy::kStatic);
  CHECK_FALSE(static_item.cycle_length);
  CHECK(static_item.cost == 0.0);
  const auto no_demand = push_optimal({0.0, 1.0}, 5.0, costs);
  CHECK(no_demand.degeneracy == Degeneracy::kNoDemand);
  CHECK(no_demand.cost == 0.0);
  CHECK(push_optimal({1.0, 1.0}, 5.0, {1.0, 0.0}).degeneracy == Degeneracy::kFreeAging);
}

TEST_CASE("ties in the push argmin go to the shorter cycle") {
  // m_c^2 = m(m+1) makes C(m) == C(m+1): lambda = 3, bp = 1, c_f/c_a = 1 gives m_c^2 = 6 = 2 * 3.
  const Point tie{1.0, 3.0, 1.0, 1.0};
  CHECK(fctest::ref_push_cost(2, tie) == doctest::Approx(fctest::ref_push_cost(3, tie)));
  CHECK(*push_optimal(tie.item(), tie.beta(), tie.costs()).cycle_length == 2);
}

TEST_CASE("pull closed form at the running example") {
  const auto sol = pull_optimal(kRunning.item(), kRunning.beta(), kRunning.costs());
  REQUIRE(sol.time_threshold);
  CHECK(*sol.time_threshold == doctest::Approx(std::sqrt(11.0) - 1.0).epsilon(1e-14));
  CHECK(sol.cost == doctest::Approx(0.2 * (std::sqrt(11.0) - 1.0)).epsilon(1e-14));
  // Independent: golden-section minimum of the renewal cost.
  const double tau = fctest::ref_pull_argmin(kRunning, 20.0);
  CHECK(*sol.time_threshold == doctest::Approx(tau).epsilon(1e-6));
  CHECK(sol.cost == doctest::Approx(fctest::ref_pull_renewal(tau, kRunning)).epsilon(1e-12));
}

TEST_CASE("pull at the perfect square point") {
  const auto sol = pull_optimal(kSquare.item(), kSquare.beta(), kSquare.costs());
  CHECK(sol.cost == doctest::Approx(0.08 * (std::sqrt(26.0) - 1.0)).epsilon(1e-14));
  CHECK(sol.cost == doctest::Approx(0.32792).epsilon(1e-4));
  const double tau = fctest::ref_pull_argmin(kSquare, 50.0);
  CHECK(sol.cost == doctest::Approx(fctest::ref_pull_renewal(tau, kSquare)).epsilon(1e-12));
}

TEST_CASE("pull cost vanishes with demand") {
  const CostParams costs{1.0, 0.1};
  double previous = 1.0;
  for (double bp : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double c = pull_optimal({1.0, 1.0}, bp, costs).cost;
    CHECK(c < previous);
    CHECK(c <= bp * costs.c_f);
    previous = c;
  }
  const auto none = pull_optimal({0.0, 1.0}, 5.0, costs);
  CHECK(none.degeneracy == Degeneracy::kNoDemand);
  CHECK(none.cost == 0.0);
  CHECK(pull_optimal({1.0, 0.0}, 5.0, costs).degeneracy == Degeneracy::kStatic);
  CHECK(pull_optimal({1.0, 1.0}, 5.0, {1.0, 0.0}).degeneracy == Degeneracy::kFreeAging);
}

TEST_CASE("genie cycle cost values") {
  const auto item = kRunning.item();
  const auto costs = kRunning.costs();
  CHECK(genie_cycle_cost(5, item, 1.0, costs) == doctest::Approx(3.0 / 7.0));
  CHECK(genie_cycle_cost(4, item, 1.0, costs) == doctest::Approx(2.6 / 6.0));
  CHECK(genie_cycle_cost(0, item, 1.0, costs) == doctest::Approx(1.0 * costs.c_f));
  CHECK(genie_cycle_cost(0, {1.0, 2.0}, 3.0, costs) == doctest::Approx(3.0));
  CHECK_THROWS_AS(genie_cycle_cost(3, {0.0, 2.0}, 1.0, costs), DomainError);
}

TEST_CASE("genie optimum matches exhaustive search and bounds both paradigms") {
  for (const auto& x : {kRunning, kSquare}) {
    const auto ref = fctest::ref_genie_argmin(x, 100);
    const auto sol = genie_optimal(x.item(), x.beta(), x.costs());
    REQUIRE(sol.fetch_age);
    CHECK(*sol.fetch_age == ref.m);
    CHECK(sol.cost == doctest::Approx(ref.cost).epsilon(1e-14));
    CHECK(sol.cost <= push_optimal(x.item(), x.beta(), x.costs()).cost);
    CHECK(sol.cost <= pull_optimal(x.item(), x.beta(), x.costs()).cost);
  }
  CHECK(*genie_optimal(kRunning.item(), 1.0, kRunning.costs()).fetch_age == 5);
  CHECK(genie_optimal(kRunning.item(), 1.0, kRunning.costs()).cost == doctest::Approx(0.428571).epsilon(1e-5));
}

TEST_CASE("genie search limit is checked") {
  CHECK_THROWS_AS(genie_optimal(kRunning.item(), 1.0, kRunning.costs(), 5), BracketError);
  CHECK_NOTHROW(genie_optimal(kRunning.item(), 1.0, kRunning.costs(), 6));
  CHECK(default_genie_search_limit(kRunning.item(), 1.0, kRunning.costs()) == 10 * 7 + 10);
  const auto free = genie_optimal({1.0, 1.0}, 1.0, {1.0, 0.0});
  CHECK(free.degeneracy == Degeneracy::kFreeAging);
  CHECK_FALSE(free.fetch_age);
}

TEST_CASE("continuous push minimizer grows with the update rate") {
  double previous = 0.0;
  for (double lambda : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const auto m = *push_optimal({1.0, lambda}, 1.0, {1.0, 0.1}).cycle_length;
    CHECK(static_cast<double>(m) >= previous);
    previous = static_cast<double>(m);
  }
}
