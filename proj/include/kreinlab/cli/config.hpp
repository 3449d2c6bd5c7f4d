#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kreinlab::cli {

/// Bad configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { real, integer, text, real_list, text_list };

/// Flat `section.key = value` configuration. Lines starting with `#` and
/// blank lines are ignored; keys must appear in the schema and at most once.
class ScenarioConfig {
 public:
  ScenarioConfig() = default;

  static ScenarioConfig parse(const std::string& text, const std::string& origin = "<config>");
  static ScenarioConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  double real(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) const;
  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
  std::vector<double> real_list(const std::string& key) const;
  std::vector<std::string> text_list(const std::string& key) const;

  /// Sorted `key=value` lines, the input of the config hash.
  std::string canonical() const;
  /// FNV-1a 64-bit of canonical(), as 16 hex digits.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// All accepted keys with their value types.
const std::map<std::string, ValueType>& schema();

}  // namespace kreinlab::cli
