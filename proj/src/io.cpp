#include "freshcache/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace freshcache {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& what, std::size_t line,
                         std::size_t column)
    : ValidationError(std::move(field),
                      line > 0 ? fmt::format("{} (line {}, column {})", what, line, column) : what),
      line_(line),
      column_(column) {}

namespace {

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

Position position_of(std::string_view text, std::size_t offset) {
  Position pos{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

// Location of the first occurrence of "key" in the source, for messages.
Position key_position(std::string_view text, std::string_view key) {
  const auto at = text.find(fmt::format("\"{}\"", key));
  if (at == std::string_view::npos) return {};
  return position_of(text, at);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    const auto leaf = field.substr(field.rfind('.') == std::string::npos ? 0 : field.rfind('.') + 1);
    const auto pos = key_position(text_, leaf);
    throw ConfigError(field, what, pos.line, pos.column);
  }

  void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                      const std::string& prefix) const {
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.contains(key)) fail(prefix + key, "unknown key");
    }
  }

  double number(const json& obj, const std::string& key, const std::string& field) const {
    if (!obj.contains(key)) fail(field, "missing required key");
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(field, "must be a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const json& obj, const std::string& key) const {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, key, key);
  }

  std::uint64_t count(const json& obj, const std::string& key, const std::string& field) const {
    if (!obj.contains(key)) fail(field, "missing required key");
    const auto& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) fail(field, "must be >= 0");
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d == std::floor(d) && d < 9.0e15) return static_cast<std::uint64_t>(d);
    }
    fail(field, "must be a nonnegative integer");
  }

  RefreshProfile refresh(const json& obj) const {
    if (!obj.is_object()) fail("refresh_profile", "must be an object");
    if (!obj.contains("kind") || !obj.at("kind").is_string()) {
      fail("refresh_profile.kind", "must be one of constant, zipf_weighted, explicit");
    }
    const auto kind = obj.at("kind").get<std::string>();
    if (kind == "constant") {
      reject_unknown(obj, {"kind", "lambda"}, "refresh_profile.");
      return ConstantRefresh{number(obj, "lambda", "refresh_profile.lambda")};
    }
    if (kind == "zipf_weighted") {
      reject_unknown(obj, {"kind", "alpha", "lambda_avg"}, "refresh_profile.");
      return ZipfRefresh{number(obj, "alpha", "refresh_profile.alpha"),
                         number(obj, "lambda_avg", "refresh_profile.lambda_avg")};
    }
    if (kind == "explicit") {
      reject_unknown(obj, {"kind", "values"}, "refresh_profile.");
      if (!obj.contains("values") || !obj.at("values").is_array()) {
        fail("refresh_profile.values", "must be an array of numbers");
      }
      ExplicitRefresh out;
      for (const auto& v : obj.at("values")) {
        if (!v.is_number()) fail("refresh_profile.values", "must be an array of numbers");
        out.values.push_back(v.get<double>());
      }
      return out;
    }
    fail("refresh_profile.kind", fmt::format("unknown kind '{}'", kind));
  }

 private:
  std::string_view text_;
};

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.recipe = CatalogRecipe{1000, 1.0, ZipfRefresh{0.0, 0.01}};
  cfg.beta = 5.0;
  cfg.costs = CostParams{1.0, 0.1};
  return cfg;
}

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto pos = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config", "malformed JSON", pos.line, pos.column);
  }
  const Reader in(text);
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object", 1, 1);
  in.reject_unknown(doc,
                    {"n_items", "zipf_popularity_z", "refresh_profile", "beta", "c_f", "c_a",
                     "buffer", "horizon", "seed", "warmup_fraction", "batch_count"},
                    "");

  RunConfig cfg;
  cfg.recipe.n_items = in.count(doc, "n_items", "n_items");
  cfg.recipe.zipf_popularity_z = in.number(doc, "zipf_popularity_z", "zipf_popularity_z");
  if (!doc.contains("refresh_profile")) in.fail("refresh_profile", "missing required key");
  cfg.recipe.refresh = in.refresh(doc.at("refresh_profile"));
  cfg.beta = in.number(doc, "beta", "beta");
  cfg.costs.c_f = in.number(doc, "c_f", "c_f");
  cfg.costs.c_a = in.number(doc, "c_a", "c_a");
  if (doc.contains("buffer")) cfg.buffer = in.count(doc, "buffer", "buffer");
  if (auto v = in.optional_number(doc, "horizon")) cfg.sim.horizon = *v;
  if (doc.contains("seed")) {
    cfg.sim.seed = in.count(doc, "seed", "seed");
    cfg.seed_in_file = true;
  }
  if (auto v = in.optional_number(doc, "warmup_fraction")) cfg.sim.warmup_fraction = *v;
  if (doc.contains("batch_count")) cfg.sim.batch_count = in.count(doc, "batch_count", "batch_count");

  try {
    validate(cfg.recipe);
    validate(cfg.costs);
    validate(cfg.sim);
    if (!std::isfinite(cfg.beta) || cfg.beta < 0.0) throw ValidationError("beta", "must be finite and >= 0");
  } catch (const ValidationError& e) {
    std::string message = e.what();
    if (message.starts_with(e.field() + ": ")) message.erase(0, e.field().size() + 2);
    in.fail(e.field(), message);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("config", fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_run_config(buffer.str());
}

json to_json(const RefreshProfile& profile) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantRefresh>) {
          return {{"kind", "constant"}, {"lambda", p.lambda}};
        } else if constexpr (std::is_same_v<T, ZipfRefresh>) {
          return {{"kind", "zipf_weighted"}, {"alpha", p.alpha}, {"lambda_avg", p.lambda_avg}};
        } else {
          return {{"kind", "explicit"}, {"values", p.values}};
        }
      },
      profile);
}

json to_json(const RunConfig& config) {
  json j = {
      {"n_items", config.recipe.n_items},
      {"zipf_popularity_z", config.recipe.zipf_popularity_z},
      {"refresh_profile", to_json(config.recipe.refresh)},
      {"beta", config.beta},
      {"c_f", config.costs.c_f},
      {"c_a", config.costs.c_a},
      {"horizon", config.sim.horizon},
      {"seed", config.sim.seed},
      {"warmup_fraction", config.sim.warmup_fraction},
      {"batch_count", config.sim.batch_count},
  };
  if (config.buffer) j["buffer"] = *config.buffer;
  return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_digest(const json& canonical) {
  return fmt::format("{:016x}", fnv1a64(canonical.dump()));
}

json to_json(const PolicySpec& spec) {
  json j = {{"kind", kind_name(spec)}};
  if (const auto* s = std::get_if<PushCycle>(&spec)) j["m"] = s->cycle_length;
  if (const auto* s = std::get_if<PullThreshold>(&spec)) j["tau"] = s->time_threshold;
  if (const auto* s = std::get_if<GenieThreshold>(&spec)) j["eta"] = s->age_threshold;
  return j;
}

PolicySpec policy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ValidationError("kind", "policy must be an object with a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  auto field = [&](const char* key) -> const json& {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw ValidationError(key, fmt::format("{} policy needs a numeric '{}'", kind, key));
    }
    return j.at(key);
  };
  PolicySpec spec;
  if (kind == "push") {
    spec = PushCycle{field("m").get<std::uint64_t>()};
  } else if (kind == "pull") {
    spec = PullThreshold{field("tau").get<double>()};
  } else if (kind == "genie") {
    spec = GenieThreshold{field("eta").get<std::uint64_t>()};
  } else if (kind == "always") {
    spec = AlwaysFetch{};
  } else if (kind == "never") {
    spec = NeverFetch{};
  } else {
    throw ValidationError("kind", fmt::format("unknown policy kind '{}'", kind));
  }
  validate(spec);
  return spec;
}

json to_json(const GroupAssignment& a) {
  json ranking = json::array();
  for (const auto& r : a.ranking) {
    ranking.push_back({{"index", r.index},
                       {"y_star", std::isfinite(r.y_star) ? json(r.y_star) : json("inf")}});
  }
  json j = {{"f_star", a.f_star},     {"n_star", a.n_star},         {"ranking", ranking},
            {"push_group", a.push_group}, {"pull_group", a.pull_group}, {"cached", a.cached}};
  j["capacity"] = a.capacity ? json(*a.capacity) : json(nullptr);
  return j;
}

json to_json(const SimResult& r) {
  return {{"avg_cost", r.avg_cost},
          {"fetch_rate", r.fetch_cost_rate},
          {"aging_rate", r.aging_cost_rate},
          {"fetch_count", r.fetch_count},
          {"request_count", r.request_count},
          {"update_count", r.update_count},
          {"std_error", r.std_error},
          {"window", r.window},
          {"degenerate", r.degenerate},
          {"non_convergent", r.non_convergent},
          {"low_event_count", r.low_event_count}};
}

void write_sim_csv_header(std::ostream& out) {
  out << "item_index,policy_kind,param,avg_cost,fetch_rate,aging_rate,std_error,fetch_count,"
         "request_count,update_count,seed,horizon\n";
}

void write_sim_csv_row(std::ostream& out, const std::string& item_index, const PolicySpec& spec,
                       const SimResult& r, const SimConfig& config) {
  const double p = param(spec);
  out << fmt::format("{},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{},{},{},{},{:.12g}\n", item_index,
                     kind_name(spec), std::isnan(p) ? std::string{} : fmt::format("{:.12g}", p),
                     r.avg_cost, r.fetch_cost_rate, r.aging_cost_rate, r.std_error, r.fetch_count,
                     r.request_count, r.update_count, config.seed, config.horizon);
}

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config_digest", m.config_digest},
          {"effective_config", m.effective_config},
          {"seed", m.seed},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at},
          {"wall_seconds", m.wall_seconds},
          {"outputs", m.outputs},
          {"parameters", m.parameters},
          {"code_version", FRESHCACHE_VERSION}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace freshcache
