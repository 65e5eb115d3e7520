#pragma once

// Parameter sweeps over the analytic model, optionally confirmed by
// simulation, producing one table per figure.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "freshcache/model.hpp"
#include "freshcache/simulator.hpp"

namespace freshcache {

struct GainCell {
  double G = 0.0;
  double F = 0.0;
  std::optional<double> reduction_pct;  ///< empty at the F == G pole
  bool near_pole = false;               ///< |F - G| within 1% of G
  double f_star = 0.0;
  int sign_changes = 0;  ///< sign changes across this G row
};

std::vector<GainCell> run_fig2_gain_surface(const std::vector<double>& F_values,
                                            const std::vector<double>& G_values);

/// Shared settings for the catalog and single-item sweeps.
struct SweepSettings {
  CatalogRecipe recipe{1000, 1.0, ZipfRefresh{0.0, 0.01}};
  double beta = 5.0;
  CostParams costs{};
  std::size_t buffer = 10;
  bool simulate = false;
  SimConfig sim{};
  /// Empty picks a horizon giving kMinRequests requests to the least
  /// popular item in the measurement window.
  std::optional<double> horizon;
  unsigned jobs = 1;
};

struct SweepRow {
  double sweep_value = 0.0;
  std::string paradigm;
  double analytic_cost = 0.0;
  std::optional<double> simulated_cost;
  std::optional<double> std_error;
  std::optional<double> oracle_cost;
  std::string flags;
};

struct SweepTable {
  std::string figure;
  std::string sweep_variable;
  std::vector<SweepRow> rows;
};

/// Single item (p = 1, lambda from the recipe) across request rates.
SweepTable run_fig3_single_item(const std::vector<double>& beta_values, const ItemParams& item,
                                const SweepSettings& settings);

/// Unconstrained catalog across aggregate request rates.
SweepTable run_fig4_multi_item(const std::vector<double>& beta_values, const SweepSettings& settings);

/// Capacity-limited catalog across refresh-profile exponents.
SweepTable run_fig5_alpha_sweep(const std::vector<double>& alpha_values,
                                const SweepSettings& settings);

/// Catalog across cache capacities.
SweepTable run_fig6_buffer_sweep(const std::vector<std::size_t>& buffer_values,
                                 const SweepSettings& settings);

/// Horizon used for a simulated point when none is given.
double auto_horizon(const Catalog& catalog, const SimConfig& config);

void write_csv(std::ostream& out, const std::vector<GainCell>& cells);
void write_csv(std::ostream& out, const SweepTable& table);

/// Finds the row for (sweep_value, paradigm), or nullptr.
const SweepRow* find_row(const SweepTable& table, double sweep_value, const std::string& paradigm);

}  // namespace freshcache
