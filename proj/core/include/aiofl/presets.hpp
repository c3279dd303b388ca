#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aiofl/metrics.hpp"
#include "aiofl/odesim.hpp"

namespace aiofl {

/// Flat `key = value` text with dotted keys and `#` comments.
class KeyValueConfig {
 public:
  /// Throws ConfigError (with the line number) on malformed lines or duplicate keys.
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;
  /// Throws ConfigError when absent or not a number.
  double number(const std::string& key) const;
  void set(const std::string& key, std::string value);
  bool erase(const std::string& key) { return entries_.erase(key) > 0; }

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  std::string to_string() const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Shortest decimal form that parses back to exactly the same double.
std::string format_number(double v);
/// Throws ConfigError naming `what` unless all of text is a finite number.
double parse_number(std::string_view text, std::string_view what);

/// A runnable experiment: scenario, component configs and tuning objective.
struct Preset {
  std::string name;
  Scenario scenario;
  LoopComponents components;
  OpiWeights weights;
};

/// Builds a preset from config entries. `base = <preset>` starts from a
/// registered preset and the remaining entries override it. Unknown keys and
/// invariant violations throw ConfigError.
Preset preset_from_config(const KeyValueConfig& cfg);

/// Keys for the active variants only, so every key round-trips.
KeyValueConfig preset_to_config(const Preset& p);

std::vector<std::string> preset_names();

/// Throws LookupError listing the available names.
Preset preset(std::string_view name);

}  // namespace aiofl
