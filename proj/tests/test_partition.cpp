#include <doctest.h>

#include <cmath>

#include "freshcache/analytic.hpp"
#include "freshcache/error.hpp"
#include "freshcache/partition.hpp"
#include "support.hpp"

using namespace freshcache;

TEST_CASE("gain cubic at the bracket ends") {
  for (double G : {5.0, 10.0, 40.0, 100.0, 400.0}) {
    CHECK(gain_cubic(0.5, G) == doctest::Approx(9.0 / 8.0 - G));
    CHECK(gain_cubic(1.0, G) == doctest::Approx(1.0));
  }
  CHECK(gain_cubic(0.5, 40.0) == doctest::Approx(-38.875));
}

TEST_CASE("zero gain threshold for the standard cost ratio") {
  const double f = zero_gain_threshold(40.0);
  CHECK(f > 1.8);
  CHECK(f < 1.9);
  CHECK(f / 2.0 > 0.9);
  CHECK(f / 2.0 < 0.95);
  CHECK(gain_cubic(f / 2.0 - 1e-9, 40.0) < 0.0);
  CHECK(gain_cubic(f / 2.0 + 1e-9, 40.0) > 0.0);
}

TEST_CASE("zero gain threshold agrees with a direct cost comparison") {
  for (double G : {5.0, 10.0, 40.0, 100.0, 400.0}) {
    const double c_a = 4.0 / G;
    const double ref = fctest::ref_zero_gain_ratio(1.0, c_a);
    CHECK(zero_gain_threshold(G) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(std::abs(reduction_pct(zero_gain_threshold(G) / 2.0, G)) < 1e-6);
  }
}

TEST_CASE("bracket guard and the general root") {
  CHECK_THROWS_AS(zero_gain_threshold(1.0), DomainError);
  CHECK_THROWS_AS(zero_gain_threshold(9.0 / 8.0), DomainError);
  for (double G : {0.1, 0.5, 1.0, 1.125}) {
    const double f = zero_gain_threshold_general(G);
    CHECK(f > 0.0);
    CHECK(f < 2.0);
    CHECK(std::abs(gain_cubic(f / 2.0, G)) < 1e-9);
  }
  CHECK(zero_gain_threshold_general(40.0) == doctest::Approx(zero_gain_threshold(40.0)).epsilon(1e-11));
  CHECK(zero_gain_threshold(CostParams{1.0, 0.0}) == 2.0);
  CHECK(zero_gain_threshold(CostParams{1.0, 0.1}) == zero_gain_threshold(40.0));
}

TEST_CASE("reduction matches the relaxed push and pull costs") {
  const double c_f = 1.0;
  const double c_a = 0.1;
  const double G = 4.0 * c_f / c_a;
  for (double bp : {0.3, 1.0, 2.0, 7.0}) {
    const double lambda = 2.0;
    const ItemParams item{1.0, lambda};
    const double push = push_relaxed_cost(item, bp, {c_f, c_a});
    const double pull = pull_optimal(item, bp, {c_f, c_a}).cost;
    CHECK(reduction_pct(bp / (2.0 * lambda), G) == doctest::Approx(100.0 * (pull - push) / push).epsilon(1e-10));
  }
}

TEST_CASE("reduction pole and domain") {
  CHECK_THROWS_AS(reduction_pct(40.0, 40.0), DomainError);
  CHECK_THROWS_AS(reduction_pct(0.0, 40.0), DomainError);
  CHECK_THROWS_AS(reduction_pct(1.0, -1.0), DomainError);
  CHECK(reduction_pct(1e-6, 40.0) < 0.0);
  CHECK(reduction_pct(5.0, 40.0) > 0.0);
}

TEST_CASE("single item grouping on either side of the threshold") {
  const CostParams costs{1.0, 0.1};
  const Catalog slow{{{1.0, 2.0}}, 1.0, costs};  // y* = 0.5
  auto a = combined_assignment(slow);
  CHECK(a.push_group.empty());
  CHECK(a.pull_group == std::vector<std::size_t>{0});
  const Catalog fast{{{1.0, 1.0}}, 3.0, costs};  // y* = 3
  a = combined_assignment(fast);
  CHECK(a.push_group == std::vector<std::size_t>{0});
  CHECK(a.pull_group.empty());
}

TEST_CASE("two item grouping and combined cost") {
  const CostParams costs{1.0, 0.1};
  // beta = 1: item 0 has p = 0.75, lambda = 0.25 (y* = 3); item 1 p = 0.25, lambda = 0.5 (y* = 0.5).
  const Catalog c{{{0.25, 0.5}, {0.75, 0.25}}, 1.0, costs};
  const auto a = combined_assignment(c);
  REQUIRE(a.ranking.size() == 2);
  CHECK(a.ranking[0].index == 1);
  CHECK(a.ranking[0].y_star == doctest::Approx(3.0));
  CHECK(a.n_star == 1);
  CHECK(a.push_group == std::vector<std::size_t>{1});
  CHECK(a.pull_group == std::vector<std::size_t>{0});
  const auto cost = combined_cost(c, a);
  const double push1 = push_optimal(c.items[1], 1.0, costs).cost;
  const double pull0 = pull_optimal(c.items[0], 1.0, costs).cost;
  CHECK(cost.exact == doctest::Approx(push1 + pull0));
  CHECK(cost.per_item_min == doctest::Approx(std::min(push1, pull_optimal(c.items[1], 1.0, costs).cost) +
                                             std::min(pull0, push_optimal(c.items[0], 1.0, costs).cost)));
  CHECK(cost.disagreements.empty());
  CHECK(cost.miss == 0.0);
  CHECK(cost.relaxed == doctest::Approx(push_relaxed_cost(c.items[1], 1.0, costs) + pull0));
}

TEST_CASE("empty push group costs the pull total") {
  const CostParams costs{1.0, 0.1};
  const Catalog c{{{0.5, 2.0}, {0.5, 3.0}}, 1.0, costs};
  const auto a = combined_assignment(c);
  CHECK(a.push_group.empty());
  const auto cost = combined_cost(c, a);
  CHECK(cost.exact == doctest::Approx(pull_optimal(c.items[0], 1.0, costs).cost + pull_optimal(c.items[1], 1.0, costs).cost));
}

TEST_CASE("static items sort first into the push group") {
  const Catalog c{{{0.5, 1.0}, {0.5, 0.0}}, 1.0, {1.0, 0.1}};
  const auto a = combined_assignment(c);
  CHECK(a.ranking[0].index == 1);
  CHECK(std::isinf(a.ranking[0].y_star));
  CHECK(a.push_group.front() == 1);
  CHECK(combined_cost(c, a).relaxed == doctest::Approx(pull_optimal(c.items[0], 1.0, {1.0, 0.1}).cost));
}

TEST_CASE("disagreements between the threshold split and the exact costs are surfaced") {
  // y* = 1.86 sits between f*(40) and the exact integer crossover.
  const CostParams costs{1.0, 0.1};
  const Catalog c{{{1.0, 1.0}}, 1.86, costs};
  const auto a = combined_assignment(c);
  REQUIRE(a.push_group.size() == 1);
  const auto cost = combined_cost(c, a);
  CHECK(push_optimal(c.items[0], 1.86, costs).cost > pull_optimal(c.items[0], 1.86, costs).cost);
  CHECK(cost.disagreements == std::vector<std::size_t>{0});
  CHECK(cost.per_item_min < cost.exact);
}

TEST_CASE("buffer assignment follows the top-B rule") {
  const auto c = build_catalog({100, 1.0, ConstantRefresh{0.01}}, 5.0, {1.0, 0.1});
  const auto full = combined_assignment(c);
  REQUIRE(full.n_star > 5);
  SUBCASE("capacity below n*") {
    const auto a = buffer_assignment(c, 5);
    CHECK(a.push_group.size() == 5);
    CHECK(a.pull_group.empty());
    CHECK(a.cached.size() == 5);
  }
  SUBCASE("capacity above n*") {
    const std::size_t b = full.n_star + 7;
    const auto a = buffer_assignment(c, b);
    CHECK(a.push_group.size() == full.n_star);
    CHECK(a.pull_group.size() == 7);
    for (std::size_t k = 0; k < b; ++k) CHECK(a.cached[k] == full.ranking[k].index);
  }
  SUBCASE("capacity zero") {
    const auto a = buffer_assignment(c, 0);
    CHECK(a.cached.empty());
    const auto cost = combined_cost(c, a);
    CHECK(cost.exact == 0.0);
    CHECK(cost.miss == doctest::Approx(5.0));
  }
  SUBCASE("capacity at least N reproduces the unconstrained split") {
    for (std::size_t b : {std::size_t{100}, std::size_t{1000}}) {
      const auto a = buffer_assignment(c, b);
      CHECK(a.push_group == full.push_group);
      CHECK(a.pull_group == full.pull_group);
      CHECK(a.cached == full.cached);
      CHECK(a.n_star == full.n_star);
    }
  }
}

TEST_CASE("buffer totals are non-increasing in capacity") {
  const auto c = build_catalog({300, 1.0, ZipfRefresh{0.5, 0.01}}, 5.0, {1.0, 0.1});
  auto previous = paradigm_totals(c, 0);
  CHECK(previous.combined == doctest::Approx(5.0));
  for (std::size_t b = 1; b <= 300; ++b) {
    const auto t = paradigm_totals(c, b);
    CHECK(t.combined <= previous.combined + 1e-12);
    CHECK(t.pull <= previous.pull + 1e-12);
    CHECK(t.push <= previous.push + 1e-12);
    CHECK(t.genie <= t.combined + 1e-12);
    CHECK(t.genie <= previous.genie + 1e-12);
    previous = t;
  }
  const auto unconstrained = paradigm_totals(c);
  CHECK(previous.combined == doctest::Approx(unconstrained.combined).epsilon(1e-14));
}

TEST_CASE("savings based admission is never worse than the affinity ranking") {
  const auto c = build_catalog({200, 1.0, ZipfRefresh{1.0, 0.01}}, 5.0, {1.0, 0.1});
  for (std::size_t b : {1, 5, 10, 50, 150}) {
    const auto t = paradigm_totals(c, b);
    CHECK(savings_admission_total(c, b) <= t.per_item_min + 1e-12);
  }
}
