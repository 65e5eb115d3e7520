#include "freshcache/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "freshcache/analytic.hpp"
#include "freshcache/error.hpp"

namespace freshcache {

namespace {

void require_chain_inputs(const ItemParams& item, double beta, const CostParams& costs,
                          const ViConfig& config) {
  validate(item);
  validate(costs);
  if (!(item.request_rate(beta) > 0.0)) throw ValidationError("beta", "request rate beta*p must be > 0");
  if (!(item.lambda > 0.0)) throw ValidationError("lambda", "must be > 0 for the embedded chain");
  if (!(costs.c_a > 0.0)) throw ValidationError("c_a", "must be > 0 for the embedded chain");
  if (!(config.discount > 0.0 && config.discount < 1.0)) {
    throw ValidationError("discount", fmt::format("must lie in (0, 1), got {}", config.discount));
  }
  if (!(config.tolerance > 0.0)) throw ValidationError("tolerance", "must be > 0");
  if (config.max_sweeps == 0) throw ValidationError("max_sweeps", "must be >= 1");
}

// Discounted value iteration on a chain whose "keep" action moves state k to
// k + 1 and whose "fetch" action restarts at state 1. The last state always
// fetches.
ViSolution iterate_chain(const std::vector<double>& keep_cost, std::size_t first,
                         double fetch_cost, const ViConfig& config, const char* name) {
  const std::size_t cap = keep_cost.size() - 1;
  const double q = config.discount;
  ViSolution sol;
  sol.state_cap = cap;
  sol.values.assign(cap + 1, 0.0);
  sol.actions.assign(cap + 1, 0);
  std::vector<double> next(cap + 1, 0.0);

  while (true) {
    const double fetch = fetch_cost + q * sol.values[1];
    std::size_t first_fetch = cap;
    bool seen_fetch = false;
    for (std::size_t k = first; k < cap; ++k) {
      const double keep = keep_cost[k] + q * sol.values[k + 1];
      const bool act = fetch < keep - 1e-12 * std::max(1.0, std::abs(keep));
      if (act && !seen_fetch) {
        first_fetch = k;
        seen_fetch = true;
      } else if (!act && seen_fetch) {
        throw StructureError(fmt::format(
            "{}: policy is not of threshold type at sweep {} (keep at state {} after fetch at {})",
            name, sol.sweeps + 1, k, first_fetch));
      }
      sol.actions[k] = act ? 1 : 0;
      next[k] = act ? fetch : keep;
    }
    sol.actions[cap] = 1;
    next[cap] = fetch;

    for (std::size_t k = first; k < cap; ++k) {
      if (next[k + 1] < next[k] - 1e-10 * std::max(1.0, std::abs(next[k]))) {
        throw StructureError(fmt::format("{}: value function decreases at state {} in sweep {}",
                                         name, k, sol.sweeps + 1));
      }
    }

    double change = 0.0;
    for (std::size_t k = first; k <= cap; ++k) change = std::max(change, std::abs(next[k] - sol.values[k]));
    sol.values.swap(next);
    ++sol.sweeps;
    sol.threshold = first_fetch > first ? first_fetch - 1 : (first > 0 ? first - 1 : 0);
    sol.peak_threshold = std::max(sol.peak_threshold, sol.threshold);

    if (config.fixed_sweeps) {
      if (sol.sweeps >= config.max_sweeps) break;
    } else {
      if (change < config.tolerance) break;
      if (sol.sweeps >= config.max_sweeps) {
        throw ConvergenceError(fmt::format("{}: no convergence after {} sweeps (last change {:.3e})",
                                           name, sol.sweeps, change));
      }
    }
  }

  if (sol.threshold + 1 >= cap) {
    throw StructureError(
        fmt::format("{}: truncation binds (threshold {} at state cap {}); raise state_cap", name,
                    sol.threshold, cap));
  }
  return sol;
}

double push_epoch_fetch_cost(const ItemParams& item, const CostParams& costs, EpochCost mode) {
  return mode == EpochCost::kPerEpoch ? item.lambda * costs.c_f : costs.c_f;
}

}  // namespace

std::uint64_t push_threshold_bound(const ItemParams& item, double beta, const CostParams& costs,
                                   EpochCost epoch_cost) {
  const double ratio =
      push_epoch_fetch_cost(item, costs, epoch_cost) / (item.request_rate(beta) * costs.c_a);
  return static_cast<std::uint64_t>(std::floor(ratio)) + 1;
}

std::uint64_t default_push_state_cap(const ItemParams& item, double beta,
                                     const CostParams& costs, EpochCost epoch_cost) {
  return 4 * push_threshold_bound(item, beta, costs, epoch_cost);
}

std::uint64_t default_pull_state_cap(const ItemParams& item, double beta,
                                     const CostParams& costs) {
  const double x = 2.0 * item.request_rate(beta) * costs.c_f / (item.lambda * costs.c_a);
  return 4 * (static_cast<std::uint64_t>(std::ceil(std::sqrt(x))) + 2);
}

ViSolution push_value_iteration(const ItemParams& item, double beta, const CostParams& costs,
                                const ViConfig& config) {
  require_chain_inputs(item, beta, costs, config);
  const double fetch_cost = push_epoch_fetch_cost(item, costs, config.epoch_cost);
  const double aging = item.request_rate(beta) * costs.c_a;
  const std::uint64_t cap =
      config.state_cap.value_or(default_push_state_cap(item, beta, costs, config.epoch_cost));
  const double minimum_cap = fetch_cost / aging + 2.0;
  if (!(static_cast<double>(cap) > minimum_cap)) {
    throw ValidationError("state_cap", fmt::format("push chain needs state_cap > {:.6g}, got {}",
                                                   minimum_cap, cap));
  }
  std::vector<double> keep_cost(cap + 1);
  for (std::uint64_t d = 0; d <= cap; ++d) keep_cost[d] = aging * static_cast<double>(d);
  return iterate_chain(keep_cost, 0, fetch_cost, config, "push value iteration");
}

ViSolution pull_value_iteration(const ItemParams& item, double beta, const CostParams& costs,
                                const ViConfig& config) {
  require_chain_inputs(item, beta, costs, config);
  const double bp = item.request_rate(beta);
  const std::uint64_t cap = config.state_cap.value_or(default_pull_state_cap(item, beta, costs));
  if (cap < 3) throw ValidationError("state_cap", fmt::format("pull chain needs state_cap >= 3, got {}", cap));
  std::vector<double> keep_cost(cap + 1, 0.0);
  for (std::uint64_t k = 1; k <= cap; ++k) {
    keep_cost[k] = item.lambda * costs.c_a * static_cast<double>(k) / bp;
  }
  return iterate_chain(keep_cost, 1, costs.c_f, config, "pull value iteration");
}

double pull_vi_time_threshold(const ViSolution& solution, const ItemParams& item, double beta) {
  return static_cast<double>(solution.threshold) / item.request_rate(beta);
}

double pull_renewal_cost(double tau, const ItemParams& item, double beta,
                         const CostParams& costs) {
  const double bp = item.request_rate(beta);
  if (!(bp > 0.0)) throw DomainError("pull_renewal_cost: request rate beta*p must be > 0");
  if (!(tau >= 0.0)) throw DomainError("pull_renewal_cost: tau must be >= 0");
  return (costs.c_a * item.lambda * bp * tau * tau / 2.0 + costs.c_f) / (tau + 1.0 / bp);
}

RenewalSearch pull_renewal_search(const ItemParams& item, double beta, const CostParams& costs,
                                  double step, std::optional<double> upper) {
  const double bp = item.request_rate(beta);
  if (!(bp > 0.0) || !(item.lambda > 0.0) || !(costs.c_a > 0.0)) {
    throw DomainError("pull_renewal_search: needs beta*p > 0, lambda > 0 and c_a > 0");
  }
  if (!(step > 0.0)) throw DomainError("pull_renewal_search: step must be > 0");
  const double hi =
      upper.value_or(std::max(20.0, 2.0 * std::sqrt(2.0 * costs.c_f / (costs.c_a * item.lambda * bp))));
  const auto points = static_cast<std::uint64_t>(std::floor(hi / step));

  RenewalSearch out;
  out.grid_cost = std::numeric_limits<double>::infinity();
  std::uint64_t best = 0;
  for (std::uint64_t i = 0; i <= points; ++i) {
    const double tau = static_cast<double>(i) * step;
    const double c = pull_renewal_cost(tau, item, beta, costs);
    if (c < out.grid_cost) {
      out.grid_cost = c;
      out.grid_tau = tau;
      best = i;
    }
  }
  if (best == points && points > 0) {
    throw BracketError(fmt::format("pull_renewal_search: minimum at grid edge {}; raise upper", hi));
  }

  const double lo = std::max(0.0, out.grid_tau - step);
  const double top = out.grid_tau + step;
  auto f = [&](double tau) { return pull_renewal_cost(tau, item, beta, costs); };
  const auto [tau, cost] = boost::math::tools::brent_find_minima(f, lo, top, 52);
  out.refined_tau = tau;
  out.refined_cost = cost;
  return out;
}

BruteForcePush push_brute_force(const ItemParams& item, double beta, const CostParams& costs,
                                std::uint64_t max_cycle) {
  const double m_c = push_continuous_cycle(item, beta, costs);
  if (!(static_cast<double>(max_cycle) >= 2.0 * std::ceil(m_c))) {
    throw ValidationError("m_max", fmt::format("must be >= 2*ceil({:.6g}), got {}", m_c, max_cycle));
  }
  BruteForcePush out{0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t m = 1; m <= max_cycle; ++m) {
    const double c = push_cycle_cost(m, item, beta, costs);
    if (c < out.cost) out = {m, c};
  }
  if (out.cycle_length == max_cycle) {
    throw BracketError(fmt::format("push_brute_force: minimum at m_max = {}", max_cycle));
  }
  return out;
}

void write_csv(std::ostream& out, const ViSolution& solution) {
  out << "state,value,action\n";
  for (std::size_t k = 0; k < solution.values.size(); ++k) {
    out << fmt::format("{},{:.17g},{}\n", k, solution.values[k], solution.actions[k]);
  }
}

}  // namespace freshcache
