#include "kreinlab/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kreinlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) throw ConfigError("config: '" + key + "' expects a number, got '" + s + "'");
  if (!std::isfinite(v)) throw ConfigError("config: '" + key + "' must be finite");
  return v;
}

std::int64_t parse_integer(const std::string& key, const std::string& s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty())
    throw ConfigError("config: '" + key + "' expects an integer, got '" + s + "'");
  return v;
}

void validate(const std::string& key, ValueType type, const std::string& value) {
  switch (type) {
    case ValueType::real: parse_real(key, value); break;
    case ValueType::integer: parse_integer(key, value); break;
    case ValueType::real_list:
      if (value.empty()) break;
      for (const auto& item : split_list(value)) parse_real(key, item);
      break;
    case ValueType::text:
      if (value.empty()) throw ConfigError("config: '" + key + "' is empty");
      break;
    case ValueType::text_list:
      for (const auto& item : split_list(value))
        if (item.empty()) throw ConfigError("config: '" + key + "' has an empty item");
      break;
  }
}

}  // namespace

const std::map<std::string, ValueType>& schema() {
  using T = ValueType;
  static const std::map<std::string, ValueType> keys = {
      {"problem.preset", T::text},
      {"problem.p", T::real_list},
      {"problem.q", T::real_list},
      {"problem.x0", T::real},
      {"problem.x1", T::real},
      {"problem.shift", T::text},
      {"extension.kind", T::text},
      {"extension.a", T::real},
      {"extension.L", T::real_list},
      {"extension.direction", T::real_list},
      {"extension.ell", T::real},
      {"sweep.count", T::integer},
      {"sweep.lo", T::real},
      {"sweep.hi", T::real},
      {"sweep.method", T::text},
      {"sweep.model", T::text},
      {"sweep.mu", T::real_list},
      {"sweep.mu_start", T::real},
      {"sweep.mu_stop", T::real},
      {"sweep.mu_factor", T::real},
      {"sweep.fit_lo", T::real},
      {"sweep.fit_hi", T::real},
      {"resolvent.f", T::text_list},
      {"grid.m1", T::integer},
      {"grid.m2", T::integer},
      {"grid.a", T::real},
      {"grid.r", T::real},
      {"grid.radius", T::real},
      {"grid.potential", T::real},
      {"grid.snumbers", T::text},
      {"grid.j_lo", T::integer},
      {"grid.j_hi", T::integer},
      {"weyl.spectrum", T::text},
      {"weyl.c_A", T::real},
      {"weyl.n", T::integer},
      {"weyl.m", T::integer},
      {"weyl.volume", T::real},
      {"weyl.r", T::real},
      {"weyl.t_lo", T::real},
      {"weyl.t_hi", T::real},
      {"weyl.samples", T::integer},
      {"kyfan.trials", T::integer},
      {"kyfan.dim", T::integer},
      {"kyfan.seed", T::integer},
      {"asymptotics.m", T::real_list},
      {"asymptotics.n", T::real_list},
      {"asymptotics.N_max", T::integer},
      {"output.path", T::text},
      {"output.format", T::text},
  };
  return keys;
}

ScenarioConfig ScenarioConfig::parse(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = schema().find(key);
    if (it == schema().end()) throw ConfigError(where + ": unknown key '" + key + "'");
    if (cfg.values_.contains(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    validate(key, it->second, value);
    cfg.values_.emplace(key, value);
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

double ScenarioConfig::real(const std::string& key, std::optional<double> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (!fallback) throw ConfigError("config: missing key '" + key + "'");
    return *fallback;
  }
  return parse_real(key, it->second);
}

std::int64_t ScenarioConfig::integer(const std::string& key, std::optional<std::int64_t> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (!fallback) throw ConfigError("config: missing key '" + key + "'");
    return *fallback;
  }
  return parse_integer(key, it->second);
}

std::string ScenarioConfig::text(const std::string& key, std::optional<std::string> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (!fallback) throw ConfigError("config: missing key '" + key + "'");
    return *fallback;
  }
  return it->second;
}

std::vector<double> ScenarioConfig::real_list(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: missing key '" + key + "'");
  std::vector<double> out;
  if (it->second.empty()) return out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_real(key, item));
  return out;
}

std::vector<std::string> ScenarioConfig::text_list(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: missing key '" + key + "'");
  return split_list(it->second);
}

std::string ScenarioConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::string ScenarioConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kreinlab::cli
