#include "freshcache/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "freshcache/analytic.hpp"
#include "freshcache/error.hpp"
#include "freshcache/oracle.hpp"
#include "freshcache/partition.hpp"
#include "freshcache/policy.hpp"

namespace freshcache {

namespace {

struct CatalogPolicies {
  std::vector<PolicySpec> push, pull, combined, genie;
};

CatalogPolicies catalog_policies(const Catalog& catalog, const GroupAssignment& assignment) {
  const std::size_t n = catalog.size();
  CatalogPolicies out;
  out.push.assign(n, AlwaysFetch{});
  out.pull.assign(n, AlwaysFetch{});
  out.combined.assign(n, AlwaysFetch{});
  out.genie.assign(n, AlwaysFetch{});
  for (std::size_t i : assignment.cached) {
    const auto& item = catalog.items[i];
    const auto push = push_optimal(item, catalog.beta, catalog.costs);
    if (push.cost < miss_cost(item, catalog.beta, catalog.costs)) out.push[i] = push_policy(push);
    out.pull[i] = pull_policy(pull_optimal(item, catalog.beta, catalog.costs));
    out.genie[i] = genie_policy(genie_optimal(item, catalog.beta, catalog.costs));
  }
  for (std::size_t i : assignment.push_group) {
    out.combined[i] = push_policy(push_optimal(catalog.items[i], catalog.beta, catalog.costs));
  }
  for (std::size_t i : assignment.pull_group) out.combined[i] = out.pull[i];
  return out;
}

std::string sim_flags(const SimResult& r) {
  std::string flags;
  if (r.non_convergent) flags += "non_convergent;";
  if (r.low_event_count) flags += "low_event_count;";
  return flags;
}

void attach(SweepRow& row, const SimResult& r) {
  row.simulated_cost = r.avg_cost;
  row.std_error = r.std_error;
  row.flags += sim_flags(r);
}

SimConfig point_config(const Catalog& catalog, const SweepSettings& s, std::size_t point) {
  SimConfig cfg = s.sim;
  cfg.seed = stream_seed(s.sim.seed, point, 0);
  cfg.horizon = s.horizon.value_or(auto_horizon(catalog, s.sim));
  return cfg;
}

// Rows for one catalog sweep point; all paradigms share one cached set and
// the same random streams.
std::vector<SweepRow> catalog_point(const Catalog& catalog, double sweep_value,
                                    std::optional<std::size_t> capacity, const SweepSettings& s,
                                    std::size_t point) {
  const auto totals = paradigm_totals(catalog, capacity);
  std::vector<SweepRow> rows{
      {sweep_value, "push", totals.push, {}, {}, {}, fmt::format("admitted={};", totals.push_admitted)},
      {sweep_value, "pull", totals.pull, {}, {}, {}, ""},
      {sweep_value, "combined", totals.combined, {}, {}, {},
       fmt::format("n_star={};cached={};disagreements={};", totals.n_star, totals.cached,
                   totals.disagreements)},
      {sweep_value, "combined_relaxed", totals.combined_relaxed, {}, {}, {}, ""},
      {sweep_value, "genie", totals.genie, {}, {}, {}, ""},
  };
  if (capacity) {
    rows.push_back({sweep_value, "savings_greedy", savings_admission_total(catalog, *capacity), {}, {}, {}, ""});
  }
  if (s.simulate) {
    const auto assignment =
        capacity ? buffer_assignment(catalog, *capacity) : combined_assignment(catalog);
    const auto policies = catalog_policies(catalog, assignment);
    const auto cfg = point_config(catalog, s, point);
    attach(rows[0], simulate_catalog(catalog, policies.push, cfg, s.jobs).aggregate);
    attach(rows[1], simulate_catalog(catalog, policies.pull, cfg, s.jobs).aggregate);
    attach(rows[2], simulate_catalog(catalog, policies.combined, cfg, s.jobs).aggregate);
    attach(rows[4], simulate_catalog(catalog, policies.genie, cfg, s.jobs).aggregate);
  }
  return rows;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.10g}", *v) : std::string{};
}

}  // namespace

std::vector<GainCell> run_fig2_gain_surface(const std::vector<double>& F_values,
                                            const std::vector<double>& G_values) {
  std::vector<GainCell> cells;
  for (double G : G_values) {
    if (!(G > 0.0)) throw ValidationError("G", "must be > 0");
    const double f_star = G > 9.0 / 8.0 ? zero_gain_threshold(G) : zero_gain_threshold_general(G);
    const std::size_t row_start = cells.size();
    for (double F : F_values) {
      if (!(F > 0.0)) throw ValidationError("F", "must be > 0");
      GainCell cell{G, F, std::nullopt, std::abs(F - G) <= 0.01 * G, f_star, 0};
      try {
        cell.reduction_pct = reduction_pct(F, G);
      } catch (const DomainError&) {
        cell.near_pole = true;
      }
      cells.push_back(cell);
    }
    int changes = 0;
    for (std::size_t k = row_start + 1; k < cells.size(); ++k) {
      const auto& a = cells[k - 1];
      const auto& b = cells[k];
      if (!a.reduction_pct || !b.reduction_pct) continue;
      if ((a.F - G) * (b.F - G) < 0.0) continue;  // straddles the pole
      if ((*a.reduction_pct < 0.0) != (*b.reduction_pct < 0.0)) ++changes;
    }
    for (std::size_t k = row_start; k < cells.size(); ++k) cells[k].sign_changes = changes;
  }
  return cells;
}

double auto_horizon(const Catalog& catalog, const SimConfig& config) {
  double min_rate = std::numeric_limits<double>::infinity();
  for (const auto& item : catalog.items) {
    const double r = item.request_rate(catalog.beta);
    if (r > 0.0) min_rate = std::min(min_rate, r);
  }
  if (!std::isfinite(min_rate)) return config.horizon;
  return 1.1 * static_cast<double>(kMinRequests) / ((1.0 - config.warmup_fraction) * min_rate);
}

SweepTable run_fig3_single_item(const std::vector<double>& beta_values, const ItemParams& item,
                                const SweepSettings& settings) {
  SweepTable table{"fig3", "beta", {}};
  const double f_star = zero_gain_threshold(settings.costs);
  for (std::size_t point = 0; point < beta_values.size(); ++point) {
    const double beta = beta_values[point];
    Catalog catalog{{item}, beta, settings.costs};
    validate(catalog);
    const auto push = push_optimal(item, beta, settings.costs);
    const auto pull = pull_optimal(item, beta, settings.costs);
    const auto genie = genie_optimal(item, beta, settings.costs);
    const bool push_group = push_affinity(item, beta) > f_star;

    SweepRow push_row{beta, "push", push.cost, {}, {}, {}, ""};
    SweepRow pull_row{beta, "pull", pull.cost, {}, {}, {}, ""};
    SweepRow genie_row{beta, "genie", genie.cost, {}, {}, {}, ""};
    SweepRow combined_row{beta, "combined", push_group ? push.cost : pull.cost, {}, {}, {},
                          fmt::format("group={};y_star={:.6g};f_star={:.6g};",
                                      push_group ? "push" : "pull", push_affinity(item, beta), f_star)};
    if (!push.degenerate()) {
      const double m_c = push_continuous_cycle(item, beta, settings.costs);
      const auto max_cycle = 2 * static_cast<std::uint64_t>(std::ceil(m_c)) + 10;
      push_row.oracle_cost = push_brute_force(item, beta, settings.costs, max_cycle).cost;
      pull_row.oracle_cost = pull_renewal_search(item, beta, settings.costs).refined_cost;
    }
    if (settings.simulate) {
      const auto cfg = point_config(catalog, settings, point);
      attach(push_row, simulate_item(item, beta, settings.costs, push_policy(push), cfg));
      attach(pull_row, simulate_item(item, beta, settings.costs, pull_policy(pull), cfg));
      attach(genie_row, simulate_item(item, beta, settings.costs, genie_policy(genie), cfg));
      attach(combined_row, simulate_item(item, beta, settings.costs,
                                         push_group ? push_policy(push) : pull_policy(pull), cfg));
    }
    for (auto* row : {&push_row, &pull_row, &combined_row, &genie_row}) table.rows.push_back(*row);
  }
  return table;
}

SweepTable run_fig4_multi_item(const std::vector<double>& beta_values, const SweepSettings& settings) {
  SweepTable table{"fig4", "beta", {}};
  for (std::size_t point = 0; point < beta_values.size(); ++point) {
    const auto catalog = build_catalog(settings.recipe, beta_values[point], settings.costs);
    for (auto& row : catalog_point(catalog, beta_values[point], std::nullopt, settings, point)) {
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

SweepTable run_fig5_alpha_sweep(const std::vector<double>& alpha_values,
                                const SweepSettings& settings) {
  SweepTable table{"fig5", "zipf_alpha", {}};
  double lambda_avg = 0.01;
  if (const auto* z = std::get_if<ZipfRefresh>(&settings.recipe.refresh)) lambda_avg = z->lambda_avg;
  if (const auto* c = std::get_if<ConstantRefresh>(&settings.recipe.refresh)) lambda_avg = c->lambda;
  for (std::size_t point = 0; point < alpha_values.size(); ++point) {
    CatalogRecipe recipe = settings.recipe;
    recipe.refresh = ZipfRefresh{alpha_values[point], lambda_avg};
    const auto catalog = build_catalog(recipe, settings.beta, settings.costs);
    for (auto& row : catalog_point(catalog, alpha_values[point], settings.buffer, settings, point)) {
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

SweepTable run_fig6_buffer_sweep(const std::vector<std::size_t>& buffer_values,
                                 const SweepSettings& settings) {
  SweepTable table{"fig6", "buffer_B", {}};
  const auto catalog = build_catalog(settings.recipe, settings.beta, settings.costs);
  const double unconstrained = paradigm_totals(catalog).combined;
  for (std::size_t point = 0; point < buffer_values.size(); ++point) {
    const double b = static_cast<double>(buffer_values[point]);
    for (auto& row : catalog_point(catalog, b, buffer_values[point], settings, point)) {
      if (row.paradigm == "combined") row.oracle_cost = unconstrained;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void write_csv(std::ostream& out, const std::vector<GainCell>& cells) {
  out << "G,F,reduction_pct,near_pole,f_star,zero_crossing_F,sign_changes\n";
  for (const auto& c : cells) {
    out << fmt::format("{:.10g},{:.10g},{},{},{:.12g},{:.12g},{}\n", c.G, c.F,
                       fmt_opt(c.reduction_pct), c.near_pole ? 1 : 0, c.f_star, c.f_star / 2.0,
                       c.sign_changes);
  }
}

void write_csv(std::ostream& out, const SweepTable& table) {
  out << "figure,sweep_variable,sweep_value,paradigm,analytic_cost,simulated_cost,std_error,"
         "abs_gap,oracle_cost,flags\n";
  for (const auto& r : table.rows) {
    std::optional<double> gap;
    if (r.simulated_cost) gap = std::abs(*r.simulated_cost - r.analytic_cost);
    out << fmt::format("{},{},{:.10g},{},{:.10g},{},{},{},{},{}\n", table.figure,
                       table.sweep_variable, r.sweep_value, r.paradigm, r.analytic_cost,
                       fmt_opt(r.simulated_cost), fmt_opt(r.std_error), fmt_opt(gap),
                       fmt_opt(r.oracle_cost), r.flags);
  }
}

const SweepRow* find_row(const SweepTable& table, double sweep_value, const std::string& paradigm) {
  for (const auto& r : table.rows) {
    if (r.sweep_value == sweep_value && r.paradigm == paradigm) return &r;
  }
  return nullptr;
}

}  // namespace freshcache
