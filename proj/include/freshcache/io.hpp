#pragma once

// JSON configuration, JSON/CSV serialization of results, run manifests.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "freshcache/error.hpp"
#include "freshcache/model.hpp"
#include "freshcache/partition.hpp"
#include "freshcache/policy.hpp"
#include "freshcache/simulator.hpp"

namespace freshcache {

/// A malformed or invalid configuration document. `line()` is 1-based, or
/// 0 when the location is unknown.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string field, const std::string& what, std::size_t line = 0,
              std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Everything a command needs: the catalog recipe, rates, costs and
/// optional simulation and capacity settings.
struct RunConfig {
  CatalogRecipe recipe;
  double beta = 5.0;
  CostParams costs;
  std::optional<std::size_t> buffer;
  SimConfig sim;
  bool seed_in_file = false;
};

/// N = 1000, z = 1, flat refresh profile with mean 0.01, beta = 5,
/// c_f = 1, c_a = 0.1.
RunConfig default_run_config();

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical form: fixed key set, keys sorted.
nlohmann::json to_json(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of fnv1a64 over the canonical dump.
std::string config_digest(const nlohmann::json& canonical);

nlohmann::json to_json(const RefreshProfile& profile);
nlohmann::json to_json(const PolicySpec& spec);
PolicySpec policy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GroupAssignment& assignment);
nlohmann::json to_json(const SimResult& result);

void write_sim_csv_header(std::ostream& out);
void write_sim_csv_row(std::ostream& out, const std::string& item_index, const PolicySpec& spec,
                       const SimResult& result, const SimConfig& config);

struct RunManifest {
  std::string command;
  std::string config_digest;
  nlohmann::json effective_config;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  nlohmann::json parameters = nlohmann::json::object();
};

nlohmann::json to_json(const RunManifest& manifest);

/// UTC timestamp in ISO 8601.
std::string utc_timestamp();

}  // namespace freshcache
