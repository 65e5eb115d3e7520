#include "freshcache/analytic.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "freshcache/error.hpp"

namespace freshcache {

const char* to_string(Degeneracy d) noexcept {
  switch (d) {
    case Degeneracy::kNone: return "none";
    case Degeneracy::kNoDemand: return "no_demand";
    case Degeneracy::kStatic: return "static";
    case Degeneracy::kFreeAging: return "free_aging";
  }
  return "unknown";
}

namespace {

// Shared classification of the boundary cases, in priority order.
Degeneracy classify(const ItemParams& item, double beta, const CostParams& costs) {
  if (item.request_rate(beta) <= 0.0) return Degeneracy::kNoDemand;
  if (item.lambda <= 0.0) return Degeneracy::kStatic;
  if (costs.c_a <= 0.0) return Degeneracy::kFreeAging;
  return Degeneracy::kNone;
}

}  // namespace

double push_continuous_cycle(const ItemParams& item, double beta, const CostParams& costs) {
  return std::sqrt(2.0 * item.lambda * costs.c_f / (item.request_rate(beta) * costs.c_a));
}

double push_cycle_cost(std::uint64_t m, const ItemParams& item, double beta,
                       const CostParams& costs) {
  if (m == 0) throw DomainError("push_cycle_cost: cycle length must be >= 1");
  const double md = static_cast<double>(m);
  return 0.5 * item.request_rate(beta) * costs.c_a * (md - 1.0) + item.lambda * costs.c_f / md;
}

PushSolution push_optimal(const ItemParams& item, double beta, const CostParams& costs) {
  if (const auto d = classify(item, beta, costs); d != Degeneracy::kNone) {
    return {std::nullopt, 0.0, d};
  }
  const double m_c = push_continuous_cycle(item, beta, costs);
  const double floor_mc = std::floor(m_c);
  if (!(floor_mc < 9.0e15)) {
    throw DomainError(fmt::format("push_optimal: cycle length {} not representable", m_c));
  }
  const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(floor_mc));
  const double c_lo = push_cycle_cost(lo, item, beta, costs);
  const double c_hi = push_cycle_cost(lo + 1, item, beta, costs);
  if (c_hi < c_lo) return {lo + 1, c_hi, Degeneracy::kNone};
  return {lo, c_lo, Degeneracy::kNone};
}

double push_relaxed_cost(const ItemParams& item, double beta, const CostParams& costs) {
  const double bp = item.request_rate(beta);
  return std::sqrt(2.0 * item.lambda * bp * costs.c_a * costs.c_f) - 0.5 * bp * costs.c_a;
}

PullSolution pull_optimal(const ItemParams& item, double beta, const CostParams& costs) {
  if (const auto d = classify(item, beta, costs); d != Degeneracy::kNone) {
    return {std::nullopt, 0.0, d};
  }
  const double bp = item.request_rate(beta);
  const double root = std::sqrt(1.0 + 2.0 * bp * costs.c_f / (costs.c_a * item.lambda));
  return {(root - 1.0) / bp, costs.c_a * item.lambda * (root - 1.0), Degeneracy::kNone};
}

double genie_cycle_cost(std::uint64_t m, const ItemParams& item, double beta,
                        const CostParams& costs) {
  const double bp = item.request_rate(beta);
  if (bp <= 0.0) throw DomainError("genie_cycle_cost: request rate beta*p must be > 0");
  if (item.lambda <= 0.0) throw DomainError("genie_cycle_cost: update rate must be > 0");
  const double md = static_cast<double>(m);
  return (0.5 * bp * costs.c_a * md * (md - 1.0) + item.lambda * costs.c_f) /
         (item.lambda / bp + md);
}

std::uint64_t default_genie_search_limit(const ItemParams& item, double beta,
                                         const CostParams& costs) {
  const double m_c = push_continuous_cycle(item, beta, costs);
  return 10 * static_cast<std::uint64_t>(std::ceil(m_c)) + 10;
}

GenieSolution genie_optimal(const ItemParams& item, double beta, const CostParams& costs,
                            std::optional<std::uint64_t> search_limit) {
  if (const auto d = classify(item, beta, costs); d != Degeneracy::kNone) {
    return {std::nullopt, 0.0, d};
  }
  const std::uint64_t limit = search_limit.value_or(default_genie_search_limit(item, beta, costs));
  std::uint64_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m <= limit; ++m) {
    const double c = genie_cycle_cost(m, item, beta, costs);
    if (c < best_cost) {
      best = m;
      best_cost = c;
    }
  }
  if (best == limit) {
    throw BracketError(
        fmt::format("genie_optimal: minimum at search limit {}; increase the limit", limit));
  }
  return {best, best_cost, Degeneracy::kNone};
}

}  // namespace freshcache
