#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kreinlab/cli/config.hpp"

namespace kreinlab::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Cells are numbers, strings or null (an empty CSV cell).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct CommandResult {
  std::optional<Table> table;
  Json summary = Json::object();
  std::vector<std::string> warnings;
  /// Numeric failures detected after output was produced.
  int exit_code = kExitOk;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
};

CommandResult cmd_dirichlet(const ScenarioConfig& cfg);
CommandResult cmd_krein1d(const ScenarioConfig& cfg);
CommandResult cmd_resolvent_check(const ScenarioConfig& cfg);
CommandResult cmd_gmu_scan(const ScenarioConfig& cfg);
CommandResult cmd_grid2d_spectrum(const ScenarioConfig& cfg);
CommandResult cmd_weyl_fit(const ScenarioConfig& cfg);
CommandResult cmd_kyfan(const ScenarioConfig& cfg, const RunOptions& opts);
CommandResult cmd_asymptotics(const ScenarioConfig& cfg);

/// CSV with a header row; numbers as %.17g.
std::string to_csv(const Table& table);
/// Flattened `key,value` CSV of the top-level summary fields.
std::string summary_csv(const Json& summary);
std::string format_number(double v);

/// Full command-line entry point. The primary output goes to --out (or
/// `out`); the run report goes to `<out>.report.json` (or `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kreinlab::cli
