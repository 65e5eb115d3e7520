#pragma once

// Independent checks on the closed forms: discounted value iteration on the
// embedded chains, exhaustive push search and a renewal-reward search for
// pull.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "freshcache/model.hpp"

namespace freshcache {

/// How the push chain prices one update epoch.
enum class EpochCost {
  /// Fetch branch costs lambda * c_f so both branches are in cost per unit
  /// time; the discounted optimum then tends to the push closed form.
  kPerEpoch,
  /// Fetch branch costs c_f, exactly as the recursion is usually written.
  kUnscaled,
};

struct ViConfig {
  double discount = 0.999;
  std::optional<std::uint64_t> state_cap;  ///< empty selects a default cap
  std::uint64_t max_sweeps = 10'000'000;
  double tolerance = 1e-9;
  EpochCost epoch_cost = EpochCost::kPerEpoch;
  /// Run exactly max_sweeps sweeps and skip the convergence requirement.
  bool fixed_sweeps = false;
};

struct ViSolution {
  std::vector<double> values;         ///< index = state (age, or request epoch)
  std::vector<std::uint8_t> actions;  ///< 1 = fetch
  std::uint64_t threshold = 0;        ///< last state that keeps the cached copy
  std::uint64_t peak_threshold = 0;   ///< largest threshold seen over all sweeps
  std::uint64_t sweeps = 0;
  std::uint64_t state_cap = 0;
};

/// floor(c / (beta p c_a)) + 1 with c = lambda c_f for kPerEpoch and c_f otherwise.
std::uint64_t push_threshold_bound(const ItemParams& item, double beta, const CostParams& costs,
                                   EpochCost epoch_cost);

std::uint64_t default_push_state_cap(const ItemParams& item, double beta,
                                     const CostParams& costs, EpochCost epoch_cost);

std::uint64_t default_pull_state_cap(const ItemParams& item, double beta,
                                     const CostParams& costs);

/// Embedded chain at update epochs over ages 0..cap. The induced push cycle
/// length is threshold + 1.
ViSolution push_value_iteration(const ItemParams& item, double beta, const CostParams& costs,
                                const ViConfig& config = {});

/// Embedded chain at request epochs k = 1..cap with elapsed time k / (beta p).
ViSolution pull_value_iteration(const ItemParams& item, double beta, const CostParams& costs,
                                const ViConfig& config = {});

/// threshold / (beta p) for a pull solution.
double pull_vi_time_threshold(const ViSolution& solution, const ItemParams& item, double beta);

/// (c_a lambda beta p tau^2 / 2 + c_f) / (tau + 1 / (beta p)).
double pull_renewal_cost(double tau, const ItemParams& item, double beta,
                         const CostParams& costs);

struct RenewalSearch {
  double grid_tau = 0.0;
  double grid_cost = 0.0;
  double refined_tau = 0.0;
  double refined_cost = 0.0;
};

/// Grid search of pull_renewal_cost over [0, upper] followed by a Brent
/// refinement around the best grid point. Throws BracketError when the grid
/// minimum sits on `upper`.
RenewalSearch pull_renewal_search(const ItemParams& item, double beta, const CostParams& costs,
                                  double step = 1e-4, std::optional<double> upper = std::nullopt);

struct BruteForcePush {
  std::uint64_t cycle_length = 0;
  double cost = 0.0;
};

/// Exhaustive argmin of push_cycle_cost over 1..max_cycle.
BruteForcePush push_brute_force(const ItemParams& item, double beta, const CostParams& costs,
                                std::uint64_t max_cycle);

/// state,value,action rows.
void write_csv(std::ostream& out, const ViSolution& solution);

}  // namespace freshcache
