#pragma once

// Test-side reference computations. Nothing here calls into the library's
// analytic or oracle modules, so agreement is a genuine cross-check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "freshcache/model.hpp"

namespace fctest {

struct Point {
  double bp = 1.0;      // beta * p
  double lambda = 1.0;
  double c_f = 1.0;
  double c_a = 0.1;

  freshcache::ItemParams item() const { return {1.0, lambda}; }
  double beta() const { return bp; }
  freshcache::CostParams costs() const { return {c_f, c_a}; }
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }

  // The acceptance grid: bp in [0.1, 10], lambda in [0.01, 5], c_f/c_a in [2, 100].
  Point grid_point() {
    Point p;
    p.bp = log_uniform(0.1, 10.0);
    p.lambda = log_uniform(0.01, 5.0);
    p.c_f = 1.0;
    p.c_a = 1.0 / log_uniform(2.0, 100.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

inline double ref_push_cost(std::uint64_t m, const Point& x) {
  const double md = static_cast<double>(m);
  return 0.5 * x.bp * x.c_a * (md - 1.0) + x.lambda * x.c_f / md;
}

struct RefPush {
  std::uint64_t m = 0;
  double cost = 0.0;
};

inline RefPush ref_push_argmin(const Point& x, std::uint64_t limit) {
  RefPush best{0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t m = 1; m <= limit; ++m) {
    const double c = ref_push_cost(m, x);
    if (c < best.cost) best = {m, c};
  }
  return best;
}

inline double ref_pull_renewal(double tau, const Point& x) {
  return (x.c_a * x.lambda * x.bp * tau * tau / 2.0 + x.c_f) / (tau + 1.0 / x.bp);
}

// Golden-section search; the renewal cost is unimodal in tau.
inline double ref_pull_argmin(const Point& x, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = hi;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (ref_pull_renewal(c, x) < ref_pull_renewal(d, x)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

inline double ref_genie_cost(std::uint64_t m, const Point& x) {
  const double md = static_cast<double>(m);
  return (0.5 * x.bp * x.c_a * md * (md - 1.0) + x.lambda * x.c_f) / (x.lambda / x.bp + md);
}

inline RefPush ref_genie_argmin(const Point& x, std::uint64_t limit) {
  RefPush best{0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t m = 0; m <= limit; ++m) {
    const double c = ref_genie_cost(m, x);
    if (c < best.cost) best = {m, c};
  }
  return best;
}

// Zero-gain ratio y = beta p / lambda at which the relaxed push cost equals
// the pull cost, found directly from the two cost expressions.
inline double ref_zero_gain_ratio(double c_f, double c_a) {
  auto gap = [&](double y) {
    const double push = std::sqrt(2.0 * y * c_a * c_f) - 0.5 * y * c_a;
    const double pull = c_a * (std::sqrt(1.0 + 2.0 * y * c_f / c_a) - 1.0);
    return pull - push;
  };
  double lo = 1.0;
  double hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fctest
