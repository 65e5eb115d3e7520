#pragma once

// Domain vocabulary shared by every module: per-item demand/refresh
// parameters, cost weights, catalogs and their Zipf-based construction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace freshcache {

/// One content item: its share of the request stream and its back-end
/// update rate. `lambda == 0` is static content.
struct ItemParams {
  double p = 0.0;
  double lambda = 0.0;

  /// Poisson request rate seen by this item under aggregate rate `beta`.
  double request_rate(double beta) const noexcept { return beta * p; }
};

struct CostParams {
  double c_f = 1.0;  ///< cost per fetch
  double c_a = 0.1;  ///< cost per unit of age per cache-served request
};

struct Catalog {
  std::vector<ItemParams> items;
  double beta = 0.0;
  CostParams costs;

  std::size_t size() const noexcept { return items.size(); }
};

struct ConstantRefresh {
  double lambda = 0.0;
};

/// lambda_n proportional to 1/n^alpha, scaled so the arithmetic mean is
/// `lambda_avg`. Negative alpha makes popular items refresh slower.
struct ZipfRefresh {
  double alpha = 0.0;
  double lambda_avg = 0.0;
};

struct ExplicitRefresh {
  std::vector<double> values;
};

using RefreshProfile = std::variant<ConstantRefresh, ZipfRefresh, ExplicitRefresh>;

struct CatalogRecipe {
  std::size_t n_items = 1;
  double zipf_popularity_z = 1.0;
  RefreshProfile refresh = ConstantRefresh{0.01};
};

/// Mutable per-item simulation state. Owned by a single simulation run.
struct ItemState {
  std::uint64_t age = 0;        ///< back-end updates since the last fetch
  double elapsed = 0.0;         ///< time since the last fetch
  double last_event_time = 0.0;

  /// Moves the clock forward to `now`, growing `elapsed`.
  void advance_to(double now) noexcept {
    elapsed += now - last_event_time;
    last_event_time = now;
  }

  void record_update() noexcept { ++age; }

  void record_fetch() noexcept {
    age = 0;
    elapsed = 0.0;
  }
};

void validate(const ItemParams& item);
void validate(const CostParams& costs);
void validate(const CatalogRecipe& recipe);
void validate(const Catalog& catalog);

/// Generalized harmonic number H_{n,z} = sum_{k=1..n} k^{-z}, accumulated
/// with Neumaier compensated summation.
double generalized_harmonic(std::size_t n, double z);

/// Zipf(z) probabilities over `n` items, most popular first.
std::vector<double> zipf_probabilities(std::size_t n, double z);

/// Per-item refresh rates for `n` items under `profile`.
std::vector<double> refresh_rates(std::size_t n, const RefreshProfile& profile);

/// Deterministic catalog construction (no randomness involved).
Catalog build_catalog(const CatalogRecipe& recipe, double beta, const CostParams& costs);

}  // namespace freshcache
