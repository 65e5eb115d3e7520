// freshcache command-line front end: analyze, simulate, sweep, oracle.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "freshcache/analytic.hpp"
#include "freshcache/error.hpp"
#include "freshcache/experiments.hpp"
#include "freshcache/io.hpp"
#include "freshcache/oracle.hpp"
#include "freshcache/partition.hpp"
#include "freshcache/policy.hpp"
#include "freshcache/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace freshcache;

namespace {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kBadInput = 2,
  kNumericFailure = 3,
};

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "freshcache-out";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool strict = false;
  std::optional<double> beta;
  std::optional<double> c_f;
  std::optional<double> c_a;
  std::optional<std::size_t> buffer;
  std::optional<double> horizon;
};

// Shared bookkeeping: effective config, outputs, summary and manifest.
class Run {
 public:
  Run(std::string command, const GlobalOptions& opts)
      : command_(std::move(command)), opts_(opts), started_(std::chrono::steady_clock::now()) {
    manifest_.command = command_;
    manifest_.started_at = utc_timestamp();
  }

  RunConfig load() {
    RunConfig cfg = opts_.config_path.empty() ? default_run_config()
                                              : load_run_config(opts_.config_path);
    if (opts_.beta) cfg.beta = *opts_.beta;
    if (opts_.c_f) cfg.costs.c_f = *opts_.c_f;
    if (opts_.c_a) cfg.costs.c_a = *opts_.c_a;
    if (opts_.buffer) cfg.buffer = *opts_.buffer;
    if (opts_.horizon) cfg.sim.horizon = *opts_.horizon;
    if (opts_.seed) {
      cfg.sim.seed = *opts_.seed;
    } else if (!cfg.seed_in_file) {
      if (const char* env = std::getenv("FRESHCACHE_SEED")) {
        try {
          cfg.sim.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw ValidationError("FRESHCACHE_SEED", fmt::format("not an unsigned integer: '{}'", env));
        }
      }
    }
    validate(cfg.costs);
    validate(cfg.sim);
    if (!std::isfinite(cfg.beta) || cfg.beta < 0.0) throw ValidationError("beta", "must be finite and >= 0");
    manifest_.effective_config = to_json(cfg);
    manifest_.config_digest = config_digest(manifest_.effective_config);
    manifest_.seed = cfg.sim.seed;
    return cfg;
  }

  fs::path output(const std::string& name) {
    fs::create_directories(opts_.out_dir);
    const auto path = fs::path(opts_.out_dir) / name;
    manifest_.outputs.push_back(path.string());
    return path;
  }

  json& parameters() { return manifest_.parameters; }
  json& summary() { return summary_; }

  int finish(int code, const std::string& error = {}) {
    manifest_.finished_at = utc_timestamp();
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    summary_["command"] = command_;
    summary_["exit_code"] = code;
    summary_["status"] = code == kOk ? "pass" : (error.empty() ? "fail" : "error");
    if (!error.empty()) summary_["error"] = error;
    try {
      const auto summary_path = output(command_ + "_summary.json");
      const auto manifest_path = output(command_ + "_manifest.json");
      summary_["config_digest"] = manifest_.config_digest;
      std::ofstream(summary_path) << summary_.dump(2) << '\n';
      std::ofstream(manifest_path) << to_json(manifest_).dump(2) << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: cannot write summary: " << e.what() << '\n';
      if (code == kOk) code = kBadInput;
    }
    return code;
  }

  template <class Body>
  int guarded(Body&& body) {
    try {
      return finish(body());
    } catch (const ValidationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return finish(kBadInput, e.what());
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return finish(kBadInput, e.what());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return finish(kNumericFailure, e.what());
    }
  }

 private:
  std::string command_;
  const GlobalOptions& opts_;
  std::chrono::steady_clock::time_point started_;
  RunManifest manifest_;
  json summary_ = json::object();
};

json maybe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json maybe(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// "a..b" (unit steps), "a..b:step", or "a,b,c".
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const double lo = std::stod(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = std::stod(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const double hi = std::stod(rest);
    if (!(step > 0.0) || hi < lo) throw ValidationError("values", fmt::format("bad range '{}'", text));
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) out.push_back(std::stod(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ValidationError("values", "empty value list");
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (!(out[k] > out[k - 1])) throw ValidationError("values", "values must be strictly increasing");
  }
  return out;
}

std::vector<double> values_or(const std::string& text, std::vector<double> fallback) {
  if (text.empty()) return fallback;
  try {
    return parse_values(text);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError("values", fmt::format("cannot parse '{}'", text));
  }
}

Catalog make_catalog(const RunConfig& cfg) { return build_catalog(cfg.recipe, cfg.beta, cfg.costs); }

// ---------------------------------------------------------------- analyze

int cmd_analyze(const GlobalOptions& opts) {
  Run run("analyze", opts);
  return run.guarded([&] {
    const auto cfg = run.load();
    const auto catalog = make_catalog(cfg);
    const double f_star = zero_gain_threshold(catalog.costs);
    const auto assignment = combined_assignment(catalog);
    std::vector<std::string> group(catalog.size(), "pull");
    for (std::size_t i : assignment.push_group) group[i] = "push";

    const auto csv_path = run.output("analyze.csv");
    std::ofstream csv(csv_path);
    csv << "item_index,p,lambda,y_star,m_star,tau_star,eta_star,push_cost,pull_cost,genie_cost,"
           "group,degeneracy\n";
    std::size_t degenerate = 0;
    const std::size_t shown = std::min<std::size_t>(catalog.size(), 20);
    fmt::print("{:>6} {:>10} {:>10} {:>10} {:>6} {:>10} {:>6} {:>10} {:>10} {:>10} {:>6}\n", "item",
               "p", "lambda", "y*", "m*", "tau*", "eta*", "C_push", "C_pull", "C_genie", "group");
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const auto& item = catalog.items[i];
      const auto push = push_optimal(item, catalog.beta, catalog.costs);
      const auto pull = pull_optimal(item, catalog.beta, catalog.costs);
      const auto genie = genie_optimal(item, catalog.beta, catalog.costs);
      const double y = push_affinity(item, catalog.beta);
      if (push.degenerate()) ++degenerate;
      auto opt = [](const auto& v) { return v ? fmt::format("{}", *v) : std::string("inf"); };
      csv << fmt::format("{},{:.12g},{:.12g},{:.12g},{},{},{},{:.12g},{:.12g},{:.12g},{},{}\n", i + 1,
                         item.p, item.lambda, y, opt(push.cycle_length), opt(pull.time_threshold),
                         opt(genie.fetch_age), push.cost, pull.cost, genie.cost, group[i],
                         to_string(push.degeneracy));
      if (i < shown) {
        fmt::print("{:>6} {:>10.4g} {:>10.4g} {:>10.4g} {:>6} {:>10.6g} {:>6} {:>10.6g} {:>10.6g} {:>10.6g} {:>6}\n",
                   i + 1, item.p, item.lambda, y, opt(push.cycle_length),
                   pull.time_threshold ? *pull.time_threshold : INFINITY, opt(genie.fetch_age),
                   push.cost, pull.cost, genie.cost, group[i]);
      }
      if (catalog.size() == 1) {
        run.summary()["item"] = {{"p", item.p},
                                 {"lambda", item.lambda},
                                 {"y_star", maybe(y)},
                                 {"m_star", maybe(push.cycle_length)},
                                 {"tau_star", maybe(pull.time_threshold)},
                                 {"eta_star", maybe(genie.fetch_age)},
                                 {"push_cost", push.cost},
                                 {"pull_cost", pull.cost},
                                 {"genie_cost", genie.cost},
                                 {"group", group[i]}};
      }
    }
    if (catalog.size() > shown) fmt::print("... {} more rows in {}\n", catalog.size() - shown, csv_path.string());

    auto totals_json = [](const ParadigmTotals& t) {
      return json{{"push", t.push},
                  {"pull", t.pull},
                  {"combined", t.combined},
                  {"combined_relaxed", t.combined_relaxed},
                  {"genie", t.genie},
                  {"per_item_min", t.per_item_min},
                  {"miss", t.miss},
                  {"n_star", t.n_star},
                  {"cached", t.cached},
                  {"push_admitted", t.push_admitted},
                  {"disagreements", t.disagreements}};
    };
    const auto totals = paradigm_totals(catalog);
    fmt::print("\nf* = {:.9f}  n* = {}  disagreements = {}\n", f_star, totals.n_star, totals.disagreements);
    fmt::print("totals: push {:.6f}  pull {:.6f}  combined {:.6f} (relaxed {:.6f})  genie {:.6f}\n",
               totals.push, totals.pull, totals.combined, totals.combined_relaxed, totals.genie);
    run.summary()["f_star"] = f_star;
    run.summary()["degenerate_items"] = degenerate;
    run.summary()["totals"] = totals_json(totals);
    run.summary()["assignment"] = to_json(assignment);
    if (cfg.buffer) {
      const auto buffered = paradigm_totals(catalog, *cfg.buffer);
      fmt::print("buffer B={}: push {:.6f}  pull {:.6f}  combined {:.6f}  genie {:.6f}\n", *cfg.buffer,
                 buffered.push, buffered.pull, buffered.combined, buffered.genie);
      run.summary()["buffer"] = *cfg.buffer;
      run.summary()["buffer_totals"] = totals_json(buffered);
    }
    return kOk;
  });
}

// ---------------------------------------------------------------- simulate

std::vector<PolicySpec> resolve_policy(const std::string& text, const Catalog& catalog,
                                       std::optional<std::size_t> buffer) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::vector<PolicySpec> specs;
  specs.reserve(catalog.size());
  auto numeric = [&]() -> double {
    try {
      std::size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("policy", fmt::format("expected 'auto' or a number after '{}:'", kind));
    }
  };
  auto integral = [&]() -> std::uint64_t {
    const double v = numeric();
    if (v < 0.0 || v != std::floor(v)) throw ValidationError("policy", "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  };
  const bool automatic = arg.empty() || arg == "auto";

  if (kind == "always" || kind == "never") {
    if (!arg.empty()) throw ValidationError("policy", fmt::format("'{}' takes no parameter", kind));
    specs.assign(catalog.size(), kind == "always" ? PolicySpec{AlwaysFetch{}} : PolicySpec{NeverFetch{}});
  } else if (kind == "push") {
    for (const auto& item : catalog.items) {
      specs.push_back(automatic ? push_policy(push_optimal(item, catalog.beta, catalog.costs))
                                : PolicySpec{PushCycle{integral()}});
    }
  } else if (kind == "pull") {
    for (const auto& item : catalog.items) {
      specs.push_back(automatic ? pull_policy(pull_optimal(item, catalog.beta, catalog.costs))
                                : PolicySpec{PullThreshold{numeric()}});
    }
  } else if (kind == "genie") {
    for (const auto& item : catalog.items) {
      specs.push_back(automatic ? genie_policy(genie_optimal(item, catalog.beta, catalog.costs))
                                : PolicySpec{GenieThreshold{integral()}});
    }
  } else if (kind == "combined") {
    if (!arg.empty()) throw ValidationError("policy", "'combined' takes no parameter");
    const auto assignment = buffer ? buffer_assignment(catalog, *buffer) : combined_assignment(catalog);
    specs.assign(catalog.size(), AlwaysFetch{});
    for (std::size_t i : assignment.push_group) {
      specs[i] = push_policy(push_optimal(catalog.items[i], catalog.beta, catalog.costs));
    }
    for (std::size_t i : assignment.pull_group) {
      specs[i] = pull_policy(pull_optimal(catalog.items[i], catalog.beta, catalog.costs));
    }
  } else {
    throw ValidationError("policy", fmt::format("unknown policy '{}'", text));
  }
  for (const auto& s : specs) validate(s);
  return specs;
}

int cmd_simulate(const GlobalOptions& opts, const std::string& policy) {
  Run run("simulate", opts);
  return run.guarded([&] {
    const auto cfg = run.load();
    const auto catalog = make_catalog(cfg);
    const auto specs = resolve_policy(policy, catalog, cfg.buffer);
    run.parameters()["policy"] = policy;
    const auto result = simulate_catalog(catalog, specs, cfg.sim, opts.jobs);

    std::ofstream csv(run.output("simulate.csv"));
    write_sim_csv_header(csv);
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      write_sim_csv_row(csv, std::to_string(i + 1), specs[i], result.items[i], cfg.sim);
    }
    const PolicySpec label = catalog.size() == 1 ? specs.front() : PolicySpec{NeverFetch{}};
    csv << fmt::format("aggregate,{},,{:.12g},{:.12g},{:.12g},{:.12g},{},{},{},{},{:.12g}\n",
                       catalog.size() == 1 ? kind_name(label) : policy.substr(0, policy.find(':')),
                       result.aggregate.avg_cost, result.aggregate.fetch_cost_rate,
                       result.aggregate.aging_cost_rate, result.aggregate.std_error,
                       result.aggregate.fetch_count, result.aggregate.request_count,
                       result.aggregate.update_count, cfg.sim.seed, cfg.sim.horizon);

    const auto& agg = result.aggregate;
    fmt::print("policy {}  avg_cost {:.6f} +/- {:.6f}  (fetch {:.6f}, aging {:.6f})\n", policy,
               agg.avg_cost, agg.std_error, agg.fetch_cost_rate, agg.aging_cost_rate);
    fmt::print("events in window: {} requests, {} updates, {} fetches\n", agg.request_count,
               agg.update_count, agg.fetch_count);
    if (agg.non_convergent) fmt::print("warning: batch means trend monotonically (non-convergent)\n");
    if (agg.low_event_count) fmt::print("warning: fewer than {} requests in window\n", kMinRequests);
    run.summary()["aggregate"] = to_json(agg);
    return opts.strict && agg.non_convergent ? kCheckFailed : kOk;
  });
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::string figure;
  std::string values;
  std::string buffer_values;
  std::string g_values;
  bool simulate = false;
  double item_lambda = 1.0;
  std::optional<double> alpha;
};

int cmd_sweep(const GlobalOptions& opts, const SweepOptions& so) {
  Run run("sweep_" + so.figure, opts);
  return run.guarded([&] {
    const auto cfg = run.load();
    SweepSettings settings;
    settings.recipe = cfg.recipe;
    settings.beta = cfg.beta;
    settings.costs = cfg.costs;
    settings.buffer = cfg.buffer.value_or(10);
    settings.simulate = so.simulate;
    settings.sim = cfg.sim;
    if (opts.horizon) settings.horizon = *opts.horizon;
    settings.jobs = opts.jobs;
    if (so.alpha) {
      double mean = 0.01;
      if (const auto* z = std::get_if<ZipfRefresh>(&settings.recipe.refresh)) mean = z->lambda_avg;
      if (const auto* c = std::get_if<ConstantRefresh>(&settings.recipe.refresh)) mean = c->lambda;
      settings.recipe.refresh = ZipfRefresh{*so.alpha, mean};
    }
    auto& params = run.parameters();
    params["figure"] = so.figure;
    params["simulate"] = so.simulate;

    const auto csv_path = run.output(so.figure + ".csv");
    std::ofstream csv(csv_path);
    std::size_t rows = 0;
    if (so.figure == "fig2") {
      const auto F = values_or(so.values, parse_values("0.05..3:0.05"));
      const auto G = values_or(so.g_values, {5, 10, 40, 100, 400});
      params["F_values"] = F;
      params["G_values"] = G;
      const auto cells = run_fig2_gain_surface(F, G);
      write_csv(csv, cells);
      rows = cells.size();
      for (double g : G) {
        const auto it = std::find_if(cells.begin(), cells.end(), [&](const GainCell& c) { return c.G == g; });
        fmt::print("G={:<6g} f*={:.9f} zero crossing F={:.9f} sign changes={}\n", g, it->f_star,
                   it->f_star / 2.0, it->sign_changes);
      }
    } else {
      SweepTable table;
      if (so.figure == "fig3") {
        const auto betas = values_or(so.values, parse_values("0.25..10:0.25"));
        params["beta_values"] = betas;
        params["item"] = {{"p", 1.0}, {"lambda", so.item_lambda}};
        table = run_fig3_single_item(betas, ItemParams{1.0, so.item_lambda}, settings);
      } else if (so.figure == "fig4") {
        const auto betas = values_or(so.values, {0.5, 1, 2, 3, 5, 7.5, 10});
        params["beta_values"] = betas;
        table = run_fig4_multi_item(betas, settings);
      } else if (so.figure == "fig5") {
        const auto alphas =
            values_or(so.values, {-2, -1.5, -1, -0.5, -0.25, 0, 0.25, 0.5, 0.75, 1, 1.5, 2});
        if (!so.buffer_values.empty()) {
          const auto b = parse_values(so.buffer_values);
          if (b.size() != 1) throw ValidationError("B", "fig5 takes a single buffer size");
          settings.buffer = static_cast<std::size_t>(b.front());
        }
        params["alpha_values"] = alphas;
        params["buffer"] = settings.buffer;
        table = run_fig5_alpha_sweep(alphas, settings);
      } else if (so.figure == "fig6") {
        const auto raw = values_or(!so.buffer_values.empty() ? so.buffer_values : so.values,
                                   parse_values(fmt::format("1..{}", cfg.recipe.n_items)));
        std::vector<std::size_t> buffers;
        for (double b : raw) {
          if (b < 0.0 || b != std::floor(b)) throw ValidationError("B", "buffer sizes must be nonnegative integers");
          buffers.push_back(static_cast<std::size_t>(b));
        }
        params["buffer_values"] = buffers;
        table = run_fig6_buffer_sweep(buffers, settings);
      } else {
        throw ValidationError("figure", fmt::format("unknown figure id '{}' (fig2..fig6)", so.figure));
      }
      write_csv(csv, table);
      rows = table.rows.size();
      bool ordering = true;
      std::vector<double> points;
      for (const auto& r : table.rows) {
        if (points.empty() || points.back() != r.sweep_value) points.push_back(r.sweep_value);
      }
      for (double x : points) {
        const auto* g = find_row(table, x, "genie");
        const auto* c = find_row(table, x, "combined");
        const auto* p = find_row(table, x, "push");
        const auto* l = find_row(table, x, "pull");
        if (g && c && p && l) {
          const double tol = 1e-12 * std::max(1.0, c->analytic_cost);
          ordering = ordering && g->analytic_cost <= c->analytic_cost + tol &&
                     c->analytic_cost <= std::min(p->analytic_cost, l->analytic_cost) + tol;
        }
      }
      run.summary()["ordering_genie_combined_min"] = ordering;
      fmt::print("{}: {} points, genie <= combined <= min(push, pull) at every point: {}\n", so.figure,
                 points.size(), ordering ? "yes" : "no");
    }
    fmt::print("wrote {} rows to {}\n", rows, csv_path.string());
    run.summary()["rows"] = rows;
    return kOk;
  });
}

// ---------------------------------------------------------------- oracle

struct OracleOptions {
  std::string which = "push";
  double q = 0.999;
  std::optional<std::uint64_t> state_cap;
  std::string epoch_cost = "per_epoch";
  double tolerance = 1e-9;
  std::optional<std::size_t> item;
};

int cmd_oracle(const GlobalOptions& opts, const OracleOptions& oo) {
  Run run("oracle", opts);
  return run.guarded([&] {
    const auto cfg = run.load();
    const auto catalog = make_catalog(cfg);
    if (oo.which != "push" && oo.which != "pull") throw ValidationError("which", "must be push or pull");
    if (oo.epoch_cost != "per_epoch" && oo.epoch_cost != "unscaled") {
      throw ValidationError("epoch-cost", "must be per_epoch or unscaled");
    }
    ViConfig vi;
    vi.discount = oo.q;
    vi.state_cap = oo.state_cap;
    vi.tolerance = oo.tolerance;
    vi.epoch_cost = oo.epoch_cost == "per_epoch" ? EpochCost::kPerEpoch : EpochCost::kUnscaled;
    auto& params = run.parameters();
    params["which"] = oo.which;
    params["q"] = oo.q;
    params["epoch_cost"] = oo.epoch_cost;
    params["state_cap"] = maybe(oo.state_cap);

    std::vector<std::size_t> items;
    if (oo.item) {
      if (*oo.item < 1 || *oo.item > catalog.size()) throw ValidationError("item", "index out of range");
      items.push_back(*oo.item - 1);
    } else {
      for (std::size_t i = 0; i < catalog.size(); ++i) items.push_back(i);
    }

    std::ofstream csv(run.output("oracle_" + oo.which + ".csv"));
    json reports = json::array();
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    for (std::size_t i : items) {
      const auto& item = catalog.items[i];
      json report = {{"item_index", i + 1}};
      if (!(item.request_rate(catalog.beta) > 0.0 && item.lambda > 0.0 && catalog.costs.c_a > 0.0)) {
        report["status"] = "skipped (degenerate)";
        ++skipped;
        reports.push_back(report);
        continue;
      }
      bool pass = false;
      if (oo.which == "push") {
        const auto analytic = push_optimal(item, catalog.beta, catalog.costs);
        const auto sol = push_value_iteration(item, catalog.beta, catalog.costs, vi);
        const std::uint64_t cycle = sol.threshold + 1;
        const double induced = push_cycle_cost(cycle, item, catalog.beta, catalog.costs);
        const double gap = (induced - analytic.cost) / analytic.cost;
        pass = gap <= 0.01;
        report.update({{"vi_threshold", sol.threshold},
                       {"vi_cycle", cycle},
                       {"analytic_cycle", *analytic.cycle_length},
                       {"vi_renewal_cost", induced},
                       {"analytic_cost", analytic.cost},
                       {"relative_gap", gap},
                       {"sweeps", sol.sweeps},
                       {"state_cap", sol.state_cap}});
        csv << fmt::format("# item {}\n", i + 1);
        write_csv(csv, sol);
        fmt::print("item {:>5}: VI cycle {} (threshold {}), analytic cycle {}, cost {:.6f} vs {:.6f} "
                   "gap {:.4f}% {}\n",
                   i + 1, cycle, sol.threshold, *analytic.cycle_length, induced, analytic.cost,
                   100.0 * gap, pass ? "PASS" : "FAIL");
      } else {
        const auto analytic = pull_optimal(item, catalog.beta, catalog.costs);
        const auto sol = pull_value_iteration(item, catalog.beta, catalog.costs, vi);
        const double bp = item.request_rate(catalog.beta);
        const double tau_vi = pull_vi_time_threshold(sol, item, catalog.beta);
        const double epochs = std::abs(tau_vi - *analytic.time_threshold) * bp;
        const auto search = pull_renewal_search(item, catalog.beta, catalog.costs);
        const double renewal_gap =
            std::abs(search.refined_cost - analytic.cost) / std::max(analytic.cost, 1e-300);
        pass = epochs <= 1.0 && renewal_gap <= 1e-6;
        report.update({{"vi_threshold_epoch", sol.threshold},
                       {"tau_vi", tau_vi},
                       {"tau_star", *analytic.time_threshold},
                       {"epoch_gap", epochs},
                       {"vi_renewal_cost", pull_renewal_cost(tau_vi, item, catalog.beta, catalog.costs)},
                       {"analytic_cost", analytic.cost},
                       {"renewal_search_tau", search.refined_tau},
                       {"renewal_search_cost", search.refined_cost},
                       {"sweeps", sol.sweeps},
                       {"state_cap", sol.state_cap}});
        csv << fmt::format("# item {}\n", i + 1);
        write_csv(csv, sol);
        fmt::print("item {:>5}: tau_vi {:.6f}, tau* {:.6f}, gap {:.3f} epochs; renewal search cost "
                   "{:.9f} vs {:.9f} {}\n",
                   i + 1, tau_vi, *analytic.time_threshold, epochs, search.refined_cost,
                   analytic.cost, pass ? "PASS" : "FAIL");
      }
      report["status"] = pass ? "pass" : "fail";
      (pass ? passed : failed) += 1;
      reports.push_back(report);
    }
    fmt::print("{} oracle: {} pass, {} fail, {} skipped\n", oo.which, passed, failed, skipped);
    run.summary()["items"] = reports;
    run.summary()["passed"] = passed;
    run.summary()["failed"] = failed;
    run.summary()["skipped"] = skipped;
    return failed == 0 ? kOk : kCheckFailed;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Push, pull, combined and genie-aided caching of dynamically updated content"};
  app.set_version_flag("--version", FRESHCACHE_VERSION);
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", opts.seed, "Random seed (falls back to the config file, then FRESHCACHE_SEED)");
  app.add_option("--jobs", opts.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--strict", opts.strict, "Treat non-convergent simulations as failures");
  app.add_option("--beta", opts.beta, "Override the aggregate request rate");
  app.add_option("--c-f", opts.c_f, "Override the fetch cost");
  app.add_option("--c-a", opts.c_a, "Override the aging cost");
  app.add_option("--buffer", opts.buffer, "Override the cache capacity");
  app.add_option("--horizon", opts.horizon, "Override the simulated horizon");

  auto* analyze = app.add_subcommand("analyze", "Closed-form thresholds, costs and grouping per item");
  analyze->fallthrough();

  std::string policy = "combined";
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one policy family over the catalog");
  simulate->fallthrough();
  simulate->add_option("--policy", policy,
                       "push:auto|M, pull:auto|T, genie:auto|E, always, never or combined")
      ->capture_default_str();

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Figure sweeps: fig2 .. fig6");
  sweep->fallthrough();
  sweep->add_option("figure", so.figure, "fig2, fig3, fig4, fig5 or fig6")->required();
  sweep->add_option("--values", so.values, "Sweep axis: a..b, a..b:step or a,b,c");
  sweep->add_option("--B", so.buffer_values, "Buffer sizes (fig6 range, fig5 single value)");
  sweep->add_option("--G", so.g_values, "G rows for fig2");
  sweep->add_option("--alpha", so.alpha, "Refresh-profile exponent for catalog sweeps");
  sweep->add_option("--item-lambda", so.item_lambda, "Update rate of the fig3 item")->capture_default_str();
  sweep->add_flag("--simulate", so.simulate, "Confirm analytic totals by simulation");

  OracleOptions oo;
  auto* oracle = app.add_subcommand("oracle", "Value-iteration and renewal cross-checks");
  oracle->fallthrough();
  oracle->add_option("--which", oo.which, "push or pull")->capture_default_str();
  oracle->add_option("--q", oo.q, "Discount factor")->capture_default_str();
  oracle->add_option("--state-cap", oo.state_cap, "Truncation of the embedded chain");
  oracle->add_option("--epoch-cost", oo.epoch_cost, "per_epoch or unscaled (push only)")->capture_default_str();
  oracle->add_option("--tolerance", oo.tolerance, "Sup-norm stopping threshold")->capture_default_str();
  oracle->add_option("--item", oo.item, "Check a single item (1-based)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  if (analyze->parsed()) return cmd_analyze(opts);
  if (simulate->parsed()) return cmd_simulate(opts, policy);
  if (sweep->parsed()) return cmd_sweep(opts, so);
  return cmd_oracle(opts, oo);
}
