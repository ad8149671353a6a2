#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rzono/core/error.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/dist/distribution.hpp"
#include "rzono/io/json.hpp"

namespace rzono::cli {

/// Raised for anything the user must fix in the config or flags (exit 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Everything one run needs. Defaults are filled in before validation and
/// the resolved object is embedded into every output file.
struct ExperimentConfig {
  std::optional<DistributionSpec> distribution;
  std::optional<ValuationSpec> valuation;
  int p = 2;
  std::uint64_t n = 2000;
  std::uint64_t reps = 2000;
  std::uint64_t seed = 20240601;
  std::uint64_t stream = 0;
  std::string mode = "exact";  // or "subsample"
  std::uint64_t subsample_draws = 10'000;
  std::uint64_t surrogate_n = 100'000;
  std::uint64_t zeta_reps = 100'000;
  std::uint64_t directions = 360;
  std::vector<std::uint64_t> ns{100, 1000, 10'000, 100'000};
  double variance_tolerance = 0.10;
  double ks_alpha = 0.01;
  double z_threshold = 4.0;
  std::uint64_t term_budget = 100'000'000;
  std::uint64_t radius_oracle_samples = 10'000'000;
  int max_cube_dim = 6;
  int identity_sets = 50;
  int max_identity_n = 10;
  int max_ustat_n = 12;

  [[nodiscard]] SeedSpec seed_spec() const { return {seed, stream}; }
};

inline json to_resolved_json(const ExperimentConfig& c) {
  json j{{"p", c.p},
         {"n", c.n},
         {"reps", c.reps},
         {"seed", c.seed},
         {"stream", c.stream},
         {"mode", c.mode},
         {"subsample_draws", c.subsample_draws},
         {"surrogate_n", c.surrogate_n},
         {"zeta_reps", c.zeta_reps},
         {"directions", c.directions},
         {"ns", c.ns},
         {"variance_tolerance", c.variance_tolerance},
         {"ks_alpha", c.ks_alpha},
         {"z_threshold", c.z_threshold},
         {"term_budget", c.term_budget},
         {"radius_oracle_samples", c.radius_oracle_samples},
         {"max_cube_dim", c.max_cube_dim},
         {"identity_sets", c.identity_sets},
         {"max_identity_n", c.max_identity_n},
         {"max_ustat_n", c.max_ustat_n}};
  j["distribution"] = c.distribution ? json(*c.distribution) : json(nullptr);
  j["valuation"] = c.valuation ? json(*c.valuation) : json(nullptr);
  return j;
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "distribution", "valuation",    "p",           "n",          "reps",           "seed",
      "stream",       "mode",         "subsample_draws", "surrogate_n", "zeta_reps",   "directions",
      "ns",           "variance_tolerance", "ks_alpha", "z_threshold", "term_budget", "radius_oracle_samples",
      "max_cube_dim", "identity_sets", "max_identity_n", "max_ustat_n", "command", "description"};
  return keys;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& k : known_keys()) known = known || k == key;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("distribution")) c.distribution = j.at("distribution").get<DistributionSpec>();
    if (j.contains("valuation")) c.valuation = j.at("valuation").get<ValuationSpec>();
    read_field(j, "p", c.p);
    read_field(j, "n", c.n);
    read_field(j, "reps", c.reps);
    read_field(j, "seed", c.seed);
    read_field(j, "stream", c.stream);
    read_field(j, "mode", c.mode);
    read_field(j, "subsample_draws", c.subsample_draws);
    read_field(j, "surrogate_n", c.surrogate_n);
    read_field(j, "zeta_reps", c.zeta_reps);
    read_field(j, "directions", c.directions);
    read_field(j, "ns", c.ns);
    read_field(j, "variance_tolerance", c.variance_tolerance);
    read_field(j, "ks_alpha", c.ks_alpha);
    read_field(j, "z_threshold", c.z_threshold);
    read_field(j, "term_budget", c.term_budget);
    read_field(j, "radius_oracle_samples", c.radius_oracle_samples);
    read_field(j, "max_cube_dim", c.max_cube_dim);
    read_field(j, "identity_sets", c.identity_sets);
    read_field(j, "max_identity_n", c.max_identity_n);
    read_field(j, "max_ustat_n", c.max_ustat_n);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  if (c.mode != "exact" && c.mode != "subsample") throw ConfigError("mode must be 'exact' or 'subsample'");
  if (c.valuation && c.distribution) {
    try {
      c.valuation->validate(c.distribution->d());
    } catch (const DomainError& e) {
      throw ConfigError(std::string("invalid valuation: ") + e.what());
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace rzono::cli
