#include <doctest.h>

#include <numeric>

#include "freshcache/error.hpp"
#include "freshcache/model.hpp"

using namespace freshcache;

TEST_CASE("single item catalog gets all the demand") {
  const auto c = build_catalog({1, 1.0, ConstantRefresh{0.01}}, 5.0, {1.0, 0.1});
  REQUIRE(c.size() == 1);
  CHECK(c.items[0].p == doctest::Approx(1.0));
  CHECK(c.items[0].lambda == doctest::Approx(0.01));
  CHECK(c.beta == 5.0);
}

TEST_CASE("two item zipf(1) popularities") {
  const auto c = build_catalog({2, 1.0, ConstantRefresh{1.0}}, 1.0, {});
  CHECK(c.items[0].p == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.items[1].p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("thousand item catalog with flat refresh profile") {
  const auto c = build_catalog({1000, 1.0, ZipfRefresh{0.0, 0.01}}, 5.0, {1.0, 0.1});
  double lambda_sum = 0.0;
  double p_sum = 0.0;
  for (const auto& item : c.items) {
    CHECK(item.lambda == 0.01);
    lambda_sum += item.lambda;
    p_sum += item.p;
  }
  CHECK(lambda_sum / 1000.0 == doctest::Approx(0.01));
  CHECK(p_sum == doctest::Approx(1.0).epsilon(1e-12));
  // Zipf order: most popular first.
  CHECK(c.items[0].p > c.items[1].p);
  CHECK(c.items[0].p / c.items[9].p == doctest::Approx(10.0));
}

TEST_CASE("zipf weighted refresh keeps the requested mean") {
  for (double alpha : {-2.0, -0.5, 0.5, 2.0}) {
    const auto rates = refresh_rates(500, ZipfRefresh{alpha, 0.01});
    const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / 500.0;
    CHECK(mean == doctest::Approx(0.01).epsilon(1e-12));
    if (alpha > 0) CHECK(rates.front() > rates.back());
    if (alpha < 0) CHECK(rates.front() < rates.back());
  }
}

TEST_CASE("zero exponent gives the uniform distribution") {
  const auto p = zipf_probabilities(4, 0.0);
  for (double v : p) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("generalized harmonic number") {
  CHECK(generalized_harmonic(1, 2.0) == 1.0);
  CHECK(generalized_harmonic(3, 1.0) == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0));
  CHECK(generalized_harmonic(1000000, 2.0) == doctest::Approx(1.6449330668482264).epsilon(1e-12));
}

TEST_CASE("recipe validation names the field") {
  auto field_of = [](const CatalogRecipe& r) {
    try {
      build_catalog(r, 1.0, {});
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string{};
  };
  CHECK(field_of({0, 1.0, ConstantRefresh{0.01}}) == "n_items");
  CHECK(field_of({3, 1.0, ZipfRefresh{1.0, -0.1}}) == "refresh_profile.lambda_avg");
  CHECK(field_of({3, 1.0, ExplicitRefresh{{1.0, 2.0}}}) == "refresh_profile.values");
  CHECK(field_of({3, 1.0, ConstantRefresh{-1.0}}) == "refresh_profile.lambda");
  CHECK(field_of({3, -1.0, ZipfRefresh{-1.0, 0.1}}).empty());
}

TEST_CASE("catalog and cost validation") {
  Catalog c{{{0.5, 1.0}, {0.4, 1.0}}, 1.0, {}};
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.items[1].p = 0.5;
  CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(validate(CostParams{0.0, 0.1}), ValidationError);
  CHECK_THROWS_AS(validate(CostParams{1.0, -0.1}), ValidationError);
  CHECK_NOTHROW(validate(CostParams{1.0, 0.0}));
  CHECK_THROWS_AS(validate(ItemParams{1.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(validate(ItemParams{0.5, -1.0}), ValidationError);
}

TEST_CASE("item state tracks age and elapsed time") {
  ItemState s;
  s.advance_to(1.5);
  s.record_update();
  s.advance_to(2.0);
  s.record_update();
  CHECK(s.age == 2);
  CHECK(s.elapsed == doctest::Approx(2.0));
  s.record_fetch();
  CHECK(s.age == 0);
  CHECK(s.elapsed == 0.0);
  s.advance_to(3.0);
  CHECK(s.elapsed == doctest::Approx(1.0));
}
