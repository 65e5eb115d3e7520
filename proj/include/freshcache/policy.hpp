#pragma once

// Executable per-item fetch rules. Each rule sees only what its controller
// can observe: push sees the age, pull sees the time since the last fetch,
// the genie sees both.

#include <cstdint>
#include <string>
#include <variant>

#include "freshcache/analytic.hpp"
#include "freshcache/model.hpp"

namespace freshcache {

/// Push a fresh copy on the update that brings the age to `cycle_length`.
struct PushCycle {
  std::uint64_t cycle_length = 1;
};

/// Fetch on a request arriving more than `time_threshold` after the last fetch.
struct PullThreshold {
  double time_threshold = 0.0;
};

/// Fetch on a request seen with age strictly above `age_threshold`.
struct GenieThreshold {
  std::uint64_t age_threshold = 0;
};

struct AlwaysFetch {};
struct NeverFetch {};

using PolicySpec = std::variant<PushCycle, PullThreshold, GenieThreshold, AlwaysFetch, NeverFetch>;

struct PolicyDecision {
  bool fetch = false;
  std::uint64_t serve_age = 0;

  bool operator==(const PolicyDecision&) const = default;
};

/// Called after `state.age` has been incremented for a back-end update.
bool on_update(const PolicySpec& spec, const ItemState& state);

PolicyDecision on_request(const PolicySpec& spec, const ItemState& state);

void validate(const PolicySpec& spec);

/// "push", "pull", "genie", "always" or "never".
const char* kind_name(const PolicySpec& spec);

/// The numeric parameter, or NaN for the baselines.
double param(const PolicySpec& spec);

std::string describe(const PolicySpec& spec);

PolicySpec push_policy(const PushSolution& solution);
PolicySpec pull_policy(const PullSolution& solution);
PolicySpec genie_policy(const GenieSolution& solution);

}  // namespace freshcache
