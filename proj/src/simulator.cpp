#include "freshcache/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "freshcache/error.hpp"

namespace freshcache {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class ExponentialStream {
 public:
  ExponentialStream(std::uint64_t seed, double rate) : engine_(seed), rate_(rate) {}

  double next_gap() {
    if (rate_ <= 0.0) return std::numeric_limits<double>::infinity();
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return -std::log1p(-u) / rate_;
  }

 private:
  std::mt19937_64 engine_;
  double rate_;
};

class BatchLedger {
 public:
  BatchLedger(double start, double end, std::size_t batches)
      : start_(start), width_((end - start) / static_cast<double>(batches)), sums_(batches, 0.0) {}

  bool measuring(double t) const noexcept { return t >= start_; }

  void charge(double t, double amount) {
    auto k = static_cast<std::size_t>((t - start_) / width_);
    sums_[std::min(k, sums_.size() - 1)] += amount;
  }

  std::vector<double> means() const {
    std::vector<double> out(sums_);
    for (double& v : out) v /= width_;
    return out;
  }

 private:
  double start_;
  double width_;
  std::vector<double> sums_;
};

double batch_std_error(std::span<const double> means) {
  const auto k = static_cast<double>(means.size());
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= k;
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  return std::sqrt(ss / (k - 1.0) / k);
}

void finish(SimResult& r) {
  r.avg_cost = r.fetch_cost_rate + r.aging_cost_rate;
  r.std_error = batch_std_error(r.batch_means);
  r.non_convergent = trend_statistic(r.batch_means) >= kTrendThreshold;
  r.low_event_count = r.request_count < kMinRequests;
}

}  // namespace

void validate(const SimConfig& config) {
  if (!std::isfinite(config.horizon) || config.horizon <= 0.0) {
    throw ValidationError("horizon", "must be finite and > 0");
  }
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0)) {
    throw ValidationError("warmup_fraction", "must lie in [0, 1)");
  }
  if (config.batch_count < 2) throw ValidationError("batch_count", "must be >= 2");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t item, unsigned stream) {
  return splitmix64(seed + kGolden * (2 * item + stream));
}

double trend_statistic(std::span<const double> batch_means) {
  const std::size_t k = batch_means.size();
  if (k < 2) return 0.0;
  long concordant = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (batch_means[j] > batch_means[i]) ++concordant;
      if (batch_means[j] < batch_means[i]) --concordant;
    }
  }
  return static_cast<double>(concordant) / (0.5 * static_cast<double>(k * (k - 1)));
}

SimResult simulate_item(const ItemParams& item, double beta, const CostParams& costs,
                        const PolicySpec& spec, const SimConfig& config,
                        std::uint64_t item_index) {
  validate(item);
  validate(costs);
  validate(config);
  validate(spec);

  const double warmup = config.warmup_fraction * config.horizon;
  SimResult result;
  result.window = config.horizon - warmup;
  result.batch_means.assign(config.batch_count, 0.0);

  const double request_rate = item.request_rate(beta);
  if (!std::isfinite(request_rate) || request_rate < 0.0) {
    throw ValidationError("beta", "request rate must be finite and >= 0");
  }
  if (request_rate + item.lambda <= 0.0) {
    result.degenerate = true;
    result.low_event_count = true;
    return result;
  }

  ExponentialStream updates(stream_seed(config.seed, item_index, 0), item.lambda);
  ExponentialStream requests(stream_seed(config.seed, item_index, 1), request_rate);
  BatchLedger fetch_ledger(warmup, config.horizon, config.batch_count);
  BatchLedger aging_ledger(warmup, config.horizon, config.batch_count);

  ItemState state;
  double next_update = updates.next_gap();
  double next_request = requests.next_gap();

  auto fetch = [&](double t) {
    state.record_fetch();
    if (fetch_ledger.measuring(t)) {
      fetch_ledger.charge(t, costs.c_f);
      ++result.fetch_count;
    }
  };

  while (true) {
    const bool is_update = next_update <= next_request;
    const double t = is_update ? next_update : next_request;
    if (!(t < config.horizon)) break;
    state.advance_to(t);
    const bool measuring = fetch_ledger.measuring(t);
    if (is_update) {
      state.record_update();
      if (measuring) ++result.update_count;
      if (on_update(spec, state)) fetch(t);
      next_update = t + updates.next_gap();
    } else {
      if (measuring) ++result.request_count;
      const auto decision = on_request(spec, state);
      if (decision.fetch) {
        fetch(t);
      } else if (measuring) {
        aging_ledger.charge(t, costs.c_a * static_cast<double>(decision.serve_age));
      }
      next_request = t + requests.next_gap();
    }
  }

  const auto fetch_means = fetch_ledger.means();
  const auto aging_means = aging_ledger.means();
  for (std::size_t k = 0; k < config.batch_count; ++k) {
    result.batch_means[k] = fetch_means[k] + aging_means[k];
    result.fetch_cost_rate += fetch_means[k];
    result.aging_cost_rate += aging_means[k];
  }
  const auto batches = static_cast<double>(config.batch_count);
  result.fetch_cost_rate /= batches;
  result.aging_cost_rate /= batches;
  finish(result);
  return result;
}

CatalogSimResult simulate_catalog(const Catalog& catalog, std::span<const PolicySpec> specs,
                                  const SimConfig& config, unsigned jobs) {
  validate(catalog);
  validate(config);
  if (specs.size() != catalog.size()) {
    throw ValidationError("specs", fmt::format("expected {} policies, got {}", catalog.size(),
                                               specs.size()));
  }

  CatalogSimResult out;
  out.items.resize(catalog.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < catalog.size(); i = next++) {
      out.items[i] = simulate_item(catalog.items[i], catalog.beta, catalog.costs, specs[i],
                                   config, i);
    }
  };
  const unsigned threads = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(catalog.size()));
  if (threads == 1) {
    worker();
  } else {
    // Exceptions escaping a jthread terminate; capture the first and rethrow.
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          try {
            worker();
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = catalog.size();
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  SimResult& agg = out.aggregate;
  agg.window = config.horizon * (1.0 - config.warmup_fraction);
  agg.batch_means.assign(config.batch_count, 0.0);
  agg.degenerate = true;
  for (const auto& r : out.items) {
    agg.fetch_cost_rate += r.fetch_cost_rate;
    agg.aging_cost_rate += r.aging_cost_rate;
    agg.fetch_count += r.fetch_count;
    agg.request_count += r.request_count;
    agg.update_count += r.update_count;
    agg.degenerate = agg.degenerate && r.degenerate;
    for (std::size_t k = 0; k < config.batch_count; ++k) agg.batch_means[k] += r.batch_means[k];
  }
  finish(agg);
  agg.non_convergent =
      agg.non_convergent || std::any_of(out.items.begin(), out.items.end(),
                                        [](const SimResult& r) { return r.non_convergent; });
  return out;
}

}  // namespace freshcache
