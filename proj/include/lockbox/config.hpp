#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lockbox/protocols.hpp"
#include "lockbox/search.hpp"
#include "lockbox/trials.hpp"

namespace lockbox {

/// Parse or validation failure, with the offending line (0 when the
/// problem is a missing key) and field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Minimal TOML: [section] headers, key = value with integers, floats,
// booleans, basic strings and (nested) arrays of those, and # comments.
struct TomlValue;
using TomlArray = std::vector<TomlValue>;
struct TomlValue {
  std::variant<std::int64_t, double, bool, std::string, TomlArray> v;
  std::size_t line = 0;
};
using TomlSection = std::map<std::string, TomlValue>;
using TomlDocument = std::map<std::string, TomlSection>;

TomlDocument parse_toml(std::string_view text);

struct WorldConfig {
  std::size_t locations = 4;
  std::vector<std::pair<Location, Location>> edges;  // empty: a path
  Location alice_lab = 0;
  Location eve_post = 1;
  Location bob_lab = 3;
  std::uint64_t mint_seed = 0;
  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

struct TheoryConfig {
  Theory name = Theory::Combination;
  unsigned combo_length = 8;
  bool destroyed_returns_marker = false;
  bool consume_both_on_read = false;
  friend bool operator==(const TheoryConfig&, const TheoryConfig&) = default;
};

struct ProtocolConfig {
  std::string name;
  std::size_t N = 8, m = 3, n = 5, w = 5, k = 3, sigma = 0, rounds = 1;
  std::int64_t bit = 0, v = 0;
  Behavior alice = Behavior::Honest;
  Behavior bob = Behavior::Honest;
  double max_discard_fraction = 0.25;
  bool privacy_amplification = true;
  LeakMethod leak = LeakMethod::PlugIn;
  double confidence = 0.95;
  std::size_t eve_stock = 0;
  std::optional<double> expect_detection;
  double tolerance = 0.02;
  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

struct EveConfig {
  std::string strategy = "passive";  // passive | constant | subset | teleport
  std::string action = "pass";
  std::size_t count = 0;
  std::size_t total = 0;  // 0: one item per protocol object
  friend bool operator==(const EveConfig&, const EveConfig&) = default;
};

struct SearchConfig {
  bool enabled = false;
  search::Objective objective = search::Objective::KeyUndetected;
  std::size_t horizon = 1;
  std::size_t cap = search::kDefaultCap;
  std::size_t samples = 10000;
  std::optional<std::string> expect;  // "num/den"
  bool expect_is_bound = false;
  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

struct ScenarioConfig {
  WorldConfig world;
  TheoryConfig theory;
  ProtocolConfig protocol;
  EveConfig eve;
  SearchConfig search;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses and validates; throws ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
std::string serialize(const ScenarioConfig& cfg);

/// Protocols that are analyses rather than engine runs.
bool is_analysis(const ScenarioConfig& cfg);

Scenario to_scenario(const ScenarioConfig& cfg);
EveFactory make_eve(const ScenarioConfig& cfg);
std::unique_ptr<search::Game> make_game(const ScenarioConfig& cfg);
Rational parse_rational(std::string_view s);

}  // namespace lockbox
