#pragma once

// Push-vs-pull gain analysis and the catalog-level grouping rules built on
// it: an unconstrained split by the zero-gain threshold and the top-B split
// under a cache capacity bound.

#include <cstddef>
#include <optional>
#include <vector>

#include "freshcache/model.hpp"

namespace freshcache {

struct GainPoint {
  double F = 0.0;  ///< beta p / (2 lambda)
  double G = 0.0;  ///< 4 c_f / c_a
  double reduction_pct = 0.0;
};

/// Percentage by which pull exceeds the relaxed push cost at (F, G).
/// Positive means push is cheaper. Throws DomainError at the F == G pole.
double reduction_pct(double F, double G);

/// F^3 - 4(1+G)F^2 + 4(1+2G)F - 4G, Horner form.
double gain_cubic(double F, double G);

/// f*(G) = 2F* with F* the root of gain_cubic in (1/2, 1). Requires
/// G > 9/8; throws DomainError otherwise.
double zero_gain_threshold(double G);

/// Same root searched on (0, 1); valid for every G > 0.
double zero_gain_threshold_general(double G);

/// f* for a cost pair: the bracketed root when G > 9/8, the general one
/// otherwise, and 2 when aging is free.
double zero_gain_threshold(const CostParams& costs);

/// y* = beta p / lambda, +infinity for static items.
double push_affinity(const ItemParams& item, double beta);

struct RankedItem {
  std::size_t index = 0;
  double y_star = 0.0;
};

struct GroupAssignment {
  std::vector<RankedItem> ranking;  ///< every item, y* descending, stable
  std::size_t n_star = 0;           ///< items with y* > f*
  double f_star = 0.0;
  std::optional<std::size_t> capacity;
  std::vector<std::size_t> push_group;
  std::vector<std::size_t> pull_group;
  std::vector<std::size_t> cached;  ///< push_group followed by pull_group
};

GroupAssignment combined_assignment(const Catalog& catalog);

/// Caches the top `capacity` items by y*; splits them at min(n*, capacity).
GroupAssignment buffer_assignment(const Catalog& catalog, std::size_t capacity);

/// Rate at which an uncached item is served straight from the back end.
double miss_cost(const ItemParams& item, double beta, const CostParams& costs);

struct CombinedCost {
  double relaxed = 0.0;         ///< push group at the relaxed push cost
  double exact = 0.0;         ///< push group at the integer-cycle optimum
  double per_item_min = 0.0;  ///< sum over cached of min(push, pull)
  double miss = 0.0;          ///< uncached items served from the back end
  /// Cached items whose group disagrees with the cheaper paradigm.
  std::vector<std::size_t> disagreements;

  double total_exact() const noexcept { return exact + miss; }
  double total_relaxed() const noexcept { return relaxed + miss; }
};

CombinedCost combined_cost(const Catalog& catalog, const GroupAssignment& assignment);

/// Catalog totals for every paradigm over one shared cached set. Each total
/// includes the miss cost of the uncached items.
struct ParadigmTotals {
  double push = 0.0;  ///< push where it beats the miss cost, miss otherwise
  double pull = 0.0;
  double combined = 0.0;
  double combined_relaxed = 0.0;
  double genie = 0.0;
  double per_item_min = 0.0;
  double miss = 0.0;
  std::size_t push_admitted = 0;
  std::size_t n_star = 0;
  std::size_t cached = 0;
  std::size_t disagreements = 0;
};

ParadigmTotals paradigm_totals(const Catalog& catalog,
                               std::optional<std::size_t> capacity = std::nullopt);

/// Total cost when the `capacity` cached items are instead chosen by
/// largest saving (miss cost minus best paradigm cost).
double savings_admission_total(const Catalog& catalog, std::size_t capacity);

}  // namespace freshcache
