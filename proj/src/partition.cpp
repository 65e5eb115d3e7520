#include "freshcache/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "freshcache/analytic.hpp"
#include "freshcache/error.hpp"

namespace freshcache {

namespace {

constexpr double kBisectionTolerance = 1e-12;

double bisect_cubic(double lo, double hi, double G) {
  // gain_cubic is negative at lo and positive at hi on every bracket we use.
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (gain_cubic(mid, G) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double push_cost_exact(const ItemParams& item, double beta, const CostParams& costs) {
  return push_optimal(item, beta, costs).cost;
}

double push_cost_relaxed(const ItemParams& item, double beta, const CostParams& costs) {
  if (item.request_rate(beta) <= 0.0 || item.lambda <= 0.0 || costs.c_a <= 0.0) return 0.0;
  return push_relaxed_cost(item, beta, costs);
}

std::vector<RankedItem> rank_items(const Catalog& catalog) {
  std::vector<RankedItem> ranking(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    ranking[i] = {i, push_affinity(catalog.items[i], catalog.beta)};
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const RankedItem& a, const RankedItem& b) { return a.y_star > b.y_star; });
  return ranking;
}

GroupAssignment split(const Catalog& catalog, std::size_t cached_count,
                      std::optional<std::size_t> capacity) {
  validate(catalog);
  GroupAssignment out;
  out.ranking = rank_items(catalog);
  out.f_star = zero_gain_threshold(catalog.costs);
  out.capacity = capacity;
  out.n_star = static_cast<std::size_t>(
      std::count_if(out.ranking.begin(), out.ranking.end(),
                    [&](const RankedItem& r) { return r.y_star > out.f_star; }));
  const std::size_t boundary = std::min(out.n_star, cached_count);
  for (std::size_t k = 0; k < cached_count; ++k) {
    auto& group = k < boundary ? out.push_group : out.pull_group;
    group.push_back(out.ranking[k].index);
  }
  out.cached = out.push_group;
  out.cached.insert(out.cached.end(), out.pull_group.begin(), out.pull_group.end());
  return out;
}

}  // namespace

double reduction_pct(double F, double G) {
  if (!(F > 0.0) || !(G > 0.0)) {
    throw DomainError(fmt::format("reduction_pct: need F > 0 and G > 0, got F={} G={}", F, G));
  }
  const double denom = std::sqrt(G * F) - F;
  if (std::abs(denom) <= 1e-12 * std::max(1.0, F)) {
    throw DomainError(fmt::format("reduction_pct: pole at F = G = {}", G));
  }
  return 100.0 * ((std::sqrt(1.0 + G * F) - 1.0) / denom - 1.0);
}

double gain_cubic(double F, double G) {
  return ((F - 4.0 * (1.0 + G)) * F + 4.0 * (1.0 + 2.0 * G)) * F - 4.0 * G;
}

double zero_gain_threshold(double G) {
  if (!(G > 9.0 / 8.0)) {
    throw DomainError(fmt::format("zero-gain bracket not guaranteed for G = {} <= 9/8", G));
  }
  return 2.0 * bisect_cubic(0.5, 1.0, G);
}

double zero_gain_threshold_general(double G) {
  if (!(G > 0.0)) throw DomainError(fmt::format("zero-gain threshold needs G > 0, got {}", G));
  return 2.0 * bisect_cubic(0.0, 1.0, G);
}

double zero_gain_threshold(const CostParams& costs) {
  if (costs.c_a <= 0.0) return 2.0;
  const double G = 4.0 * costs.c_f / costs.c_a;
  return G > 9.0 / 8.0 ? zero_gain_threshold(G) : zero_gain_threshold_general(G);
}

double push_affinity(const ItemParams& item, double beta) {
  if (item.lambda <= 0.0) return std::numeric_limits<double>::infinity();
  return item.request_rate(beta) / item.lambda;
}

GroupAssignment combined_assignment(const Catalog& catalog) {
  return split(catalog, catalog.size(), std::nullopt);
}

GroupAssignment buffer_assignment(const Catalog& catalog, std::size_t capacity) {
  return split(catalog, std::min(capacity, catalog.size()), capacity);
}

double miss_cost(const ItemParams& item, double beta, const CostParams& costs) {
  return item.request_rate(beta) * costs.c_f;
}

CombinedCost combined_cost(const Catalog& catalog, const GroupAssignment& assignment) {
  const double beta = catalog.beta;
  const auto& costs = catalog.costs;
  CombinedCost out;
  std::vector<bool> is_cached(catalog.size(), false);

  for (std::size_t i : assignment.push_group) {
    const auto& item = catalog.items.at(i);
    is_cached[i] = true;
    const double push = push_cost_exact(item, beta, costs);
    const double pull = pull_optimal(item, beta, costs).cost;
    out.relaxed += push_cost_relaxed(item, beta, costs);
    out.exact += push;
    out.per_item_min += std::min(push, pull);
    if (push > pull) out.disagreements.push_back(i);
  }
  for (std::size_t i : assignment.pull_group) {
    const auto& item = catalog.items.at(i);
    is_cached[i] = true;
    const double push = push_cost_exact(item, beta, costs);
    const double pull = pull_optimal(item, beta, costs).cost;
    out.relaxed += pull;
    out.exact += pull;
    out.per_item_min += std::min(push, pull);
    if (push < pull) out.disagreements.push_back(i);
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (!is_cached[i]) out.miss += miss_cost(catalog.items[i], beta, costs);
  }
  std::sort(out.disagreements.begin(), out.disagreements.end());
  return out;
}

ParadigmTotals paradigm_totals(const Catalog& catalog, std::optional<std::size_t> capacity) {
  const auto assignment =
      capacity ? buffer_assignment(catalog, *capacity) : combined_assignment(catalog);
  const auto combined = combined_cost(catalog, assignment);
  const double beta = catalog.beta;
  const auto& costs = catalog.costs;

  ParadigmTotals out;
  out.miss = combined.miss;
  out.combined = combined.total_exact();
  out.combined_relaxed = combined.total_relaxed();
  out.per_item_min = combined.per_item_min + combined.miss;
  out.n_star = assignment.n_star;
  out.cached = assignment.cached.size();
  out.disagreements = combined.disagreements.size();
  out.push = out.pull = out.genie = combined.miss;

  for (std::size_t i : assignment.cached) {
    const auto& item = catalog.items[i];
    const double miss = miss_cost(item, beta, costs);
    const double push = push_cost_exact(item, beta, costs);
    if (push < miss) {
      out.push += push;
      ++out.push_admitted;
    } else {
      out.push += miss;
    }
    out.pull += pull_optimal(item, beta, costs).cost;
    out.genie += genie_optimal(item, beta, costs).cost;
  }
  return out;
}

double savings_admission_total(const Catalog& catalog, std::size_t capacity) {
  validate(catalog);
  const double beta = catalog.beta;
  const auto& costs = catalog.costs;
  struct Candidate {
    double miss;
    double best;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(catalog.size());
  for (const auto& item : catalog.items) {
    const double best =
        std::min(push_cost_exact(item, beta, costs), pull_optimal(item, beta, costs).cost);
    candidates.push_back({miss_cost(item, beta, costs), best});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.miss - a.best > b.miss - b.best;
  });
  double total = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    total += k < capacity ? candidates[k].best : candidates[k].miss;
  }
  return total;
}

}  // namespace freshcache
