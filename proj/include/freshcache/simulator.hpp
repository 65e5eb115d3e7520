#pragma once

// Continuous-time Monte Carlo for one item or a whole catalog. Requests and
// back-end updates are independent Poisson streams; a PolicySpec decides
// fetches and the run reports cost rates over the post-warmup window.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "freshcache/model.hpp"
#include "freshcache/policy.hpp"

namespace freshcache {

struct SimConfig {
  double horizon = 1.0e6;
  std::uint64_t seed = 0;
  double warmup_fraction = 0.1;
  std::size_t batch_count = 20;
};

void validate(const SimConfig& config);

struct SimResult {
  double avg_cost = 0.0;
  double fetch_cost_rate = 0.0;
  double aging_cost_rate = 0.0;
  // Event counts inside the measurement window.
  std::uint64_t fetch_count = 0;
  std::uint64_t request_count = 0;
  std::uint64_t update_count = 0;
  double std_error = 0.0;
  double window = 0.0;  ///< length of the measurement window
  std::vector<double> batch_means;
  bool degenerate = false;
  bool non_convergent = false;   ///< batch means trend monotonically
  bool low_event_count = false;  ///< fewer than kMinRequests requests
};

inline constexpr std::uint64_t kMinRequests = 10'000;
inline constexpr double kTrendThreshold = 0.8;

/// Seed of one random stream. Distinct (item, stream) pairs never share a seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t item, unsigned stream);

/// `item_index` selects the random streams, so a catalog run and a direct
/// call with the same index agree bit for bit.
SimResult simulate_item(const ItemParams& item, double beta, const CostParams& costs,
                        const PolicySpec& spec, const SimConfig& config,
                        std::uint64_t item_index = 0);

struct CatalogSimResult {
  std::vector<SimResult> items;
  SimResult aggregate;
};

/// Runs every item on up to `jobs` threads. Results do not depend on `jobs`.
CatalogSimResult simulate_catalog(const Catalog& catalog, std::span<const PolicySpec> specs,
                                  const SimConfig& config, unsigned jobs = 1);

/// Kendall rank correlation between batch index and batch mean.
double trend_statistic(std::span<const double> batch_means);

}  // namespace freshcache
