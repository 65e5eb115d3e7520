#pragma once

// Closed-form long-run average costs and optimal thresholds for a single
// item under push (update-driven), pull (request-driven) and genie-aided
// control.
//
// Cycle-length convention: a push policy of cycle length m pushes a fresh
// copy the moment the age reaches m, so the age cycles 0, 1, ..., m-1. The
// genie's C(m) uses the same convention: fetch on the first request seen
// with age >= m.

#include <cstdint>
#include <optional>

#include "freshcache/model.hpp"

namespace freshcache {

enum class Degeneracy {
  kNone,
  kNoDemand,   ///< beta * p == 0: nothing is ever served
  kStatic,     ///< lambda == 0: content never ages
  kFreeAging,  ///< c_a == 0: serving stale content costs nothing
};

const char* to_string(Degeneracy d) noexcept;

struct PushSolution {
  /// Updates per push cycle; empty means "never push".
  std::optional<std::uint64_t> cycle_length;
  double cost = 0.0;
  Degeneracy degeneracy = Degeneracy::kNone;

  bool degenerate() const noexcept { return degeneracy != Degeneracy::kNone; }
};

struct PullSolution {
  /// Fetch on the first request arriving more than this long after the
  /// previous fetch; empty means "never fetch".
  std::optional<double> time_threshold;
  double cost = 0.0;
  Degeneracy degeneracy = Degeneracy::kNone;

  bool degenerate() const noexcept { return degeneracy != Degeneracy::kNone; }
};

struct GenieSolution {
  /// argmin of genie_cycle_cost: fetch on a request once the age reaches
  /// this value. Empty means "never fetch".
  std::optional<std::uint64_t> fetch_age;
  double cost = 0.0;
  Degeneracy degeneracy = Degeneracy::kNone;

  bool degenerate() const noexcept { return degeneracy != Degeneracy::kNone; }
};

/// Real-valued minimizer sqrt(2 lambda c_f / (beta p c_a)) of push_cycle_cost.
double push_continuous_cycle(const ItemParams& item, double beta, const CostParams& costs);

/// (1/2) beta p c_a (m - 1) + lambda c_f / m. Throws DomainError for m == 0.
double push_cycle_cost(std::uint64_t m, const ItemParams& item, double beta,
                       const CostParams& costs);

/// Integer-cycle optimum; ties go to the shorter cycle.
PushSolution push_optimal(const ItemParams& item, double beta, const CostParams& costs);

/// sqrt(2 lambda beta p c_a c_f) - beta p c_a / 2: the push cost at the
/// continuous minimizer. Exact when that minimizer is an integer.
double push_relaxed_cost(const ItemParams& item, double beta, const CostParams& costs);

PullSolution pull_optimal(const ItemParams& item, double beta, const CostParams& costs);

/// (0.5 beta p c_a m (m - 1) + lambda c_f) / (lambda / (beta p) + m).
double genie_cycle_cost(std::uint64_t m, const ItemParams& item, double beta,
                        const CostParams& costs);

/// 10 * ceil(m_c) + 10 where m_c is the push continuous cycle.
std::uint64_t default_genie_search_limit(const ItemParams& item, double beta,
                                         const CostParams& costs);

/// argmin of genie_cycle_cost over 0..search_limit. Throws BracketError if
/// the minimum sits on search_limit.
GenieSolution genie_optimal(const ItemParams& item, double beta, const CostParams& costs,
                            std::optional<std::uint64_t> search_limit = std::nullopt);

}  // namespace freshcache
