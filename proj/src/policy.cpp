#include "freshcache/policy.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "freshcache/error.hpp"

namespace freshcache {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Deciders take only the observation their controller is entitled to.
bool push_fires(const PushCycle& rule, std::uint64_t age) { return age >= rule.cycle_length; }

bool pull_fires(const PullThreshold& rule, double elapsed) { return elapsed > rule.time_threshold; }

bool genie_fires(const GenieThreshold& rule, std::uint64_t age) { return age > rule.age_threshold; }

}  // namespace

bool on_update(const PolicySpec& spec, const ItemState& state) {
  if (const auto* push = std::get_if<PushCycle>(&spec)) return push_fires(*push, state.age);
  return false;
}

PolicyDecision on_request(const PolicySpec& spec, const ItemState& state) {
  const bool fetch = std::visit(
      Overloaded{
          [](const PushCycle&) { return false; },
          [&](const PullThreshold& rule) { return pull_fires(rule, state.elapsed); },
          [&](const GenieThreshold& rule) { return genie_fires(rule, state.age); },
          [](const AlwaysFetch&) { return true; },
          [](const NeverFetch&) { return false; },
      },
      spec);
  return {fetch, fetch ? 0 : state.age};
}

void validate(const PolicySpec& spec) {
  if (const auto* push = std::get_if<PushCycle>(&spec); push && push->cycle_length == 0) {
    throw ValidationError("m", "push cycle length must be >= 1");
  }
  if (const auto* pull = std::get_if<PullThreshold>(&spec)) {
    if (!std::isfinite(pull->time_threshold) || pull->time_threshold < 0.0) {
      throw ValidationError("tau", "pull threshold must be finite and >= 0");
    }
  }
}

const char* kind_name(const PolicySpec& spec) {
  return std::visit(Overloaded{
                        [](const PushCycle&) { return "push"; },
                        [](const PullThreshold&) { return "pull"; },
                        [](const GenieThreshold&) { return "genie"; },
                        [](const AlwaysFetch&) { return "always"; },
                        [](const NeverFetch&) { return "never"; },
                    },
                    spec);
}

double param(const PolicySpec& spec) {
  return std::visit(Overloaded{
                        [](const PushCycle& s) { return static_cast<double>(s.cycle_length); },
                        [](const PullThreshold& s) { return s.time_threshold; },
                        [](const GenieThreshold& s) { return static_cast<double>(s.age_threshold); },
                        [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); },
                    },
                    spec);
}

std::string describe(const PolicySpec& spec) {
  const double v = param(spec);
  if (std::isnan(v)) return kind_name(spec);
  return fmt::format("{}:{}", kind_name(spec), v);
}

PolicySpec push_policy(const PushSolution& solution) {
  if (!solution.cycle_length) return NeverFetch{};
  return PushCycle{*solution.cycle_length};
}

PolicySpec pull_policy(const PullSolution& solution) {
  if (!solution.time_threshold) return NeverFetch{};
  return PullThreshold{*solution.time_threshold};
}

PolicySpec genie_policy(const GenieSolution& solution) {
  if (!solution.fetch_age) return NeverFetch{};
  if (*solution.fetch_age == 0) return AlwaysFetch{};
  return GenieThreshold{*solution.fetch_age - 1};
}

}  // namespace freshcache
