#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "kreinlab/cli/commands.hpp"
#include "kreinlab/numkernel/errors.hpp"

namespace kreinlab::cli {

namespace {

Json versions() {
  return {{"kreinlab", kVersion},
          {"compiler", __VERSION__},
          {"cli11", CLI11_VERSION},
          {"nlohmann_json",
           std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
               std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

struct Invocation {
  std::string config_path;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
};

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"dirichlet", "Dirichlet eigenvalues of an interval problem"},
      {"krein1d", "Krein-like extension spectrum by shooting, reduction and buckling"},
      {"resolvent-check", "Compare a direct resolvent solve with the Krein resolvent formula"},
      {"gmu-scan", "Lower bound of G^mu along a decreasing mu grid"},
      {"grid2d-spectrum", "Spectrum and cluster report of the discrete 2D model"},
      {"weyl-fit", "Weyl ratio and remainder fit of a spectrum CSV"},
      {"kyfan", "Random Ky Fan inequality suite"},
      {"asymptotics", "Exponent tables for theta_N and beta prime"},
  };
  return d;
}

CommandResult dispatch(const std::string& cmd, const ScenarioConfig& cfg, const RunOptions& opts) {
  if (cmd == "dirichlet") return cmd_dirichlet(cfg);
  if (cmd == "krein1d") return cmd_krein1d(cfg);
  if (cmd == "resolvent-check") return cmd_resolvent_check(cfg);
  if (cmd == "gmu-scan") return cmd_gmu_scan(cfg);
  if (cmd == "grid2d-spectrum") return cmd_grid2d_spectrum(cfg);
  if (cmd == "weyl-fit") return cmd_weyl_fit(cfg);
  if (cmd == "kyfan") return cmd_kyfan(cfg, opts);
  return cmd_asymptotics(cfg);
}

std::string render(const CommandResult& r, const std::string& format) {
  if (format == "csv") return r.table ? to_csv(*r.table) : summary_csv(r.summary);
  Json j = Json::object();
  if (r.table) {
    j["columns"] = r.table->columns;
    j["rows"] = r.table->rows;
  }
  j["summary"] = r.summary;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("cannot write '" + path + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Spectral experiments for Krein-like extensions"};
  app.require_subcommand(1, 1);
  Invocation inv;
  app.add_option("--config", inv.config_path, "Scenario config (flat key = value file)");
  app.add_option("--out", inv.out, "Output path; the run report goes to <out>.report.json");
  app.add_option("--format", inv.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", inv.seed, "Seed for randomized commands");
  for (const auto& [name, desc] : descriptions()) app.add_subcommand(name, desc)->fallthrough();

  Json report = {{"command", nullptr}, {"config_hash", nullptr}, {"versions", versions()}, {"warnings", Json::array()}};
  int code = kExitOk;
  std::string out_path;
  auto finish = [&](int c, const std::string& error) {
    report["exit_code"] = c;
    if (!error.empty()) {
      report["error"] = error;
      err << "error: " << error << "\n";
    }
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = report.dump(2) + "\n";
    if (!out_path.empty()) {
      try {
        write_file(out_path + ".report.json", text);
        return c;
      } catch (const ConfigError&) {
      }
    }
    err << text;
    return c;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    return finish(kExitUsage, e.what());
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  report["command"] = cmd;
  try {
    ScenarioConfig cfg = inv.config_path.empty() ? ScenarioConfig{} : ScenarioConfig::load(inv.config_path);
    report["config_hash"] = cfg.hash();
    out_path = !inv.out.empty() ? inv.out : cfg.text("output.path", "");
    std::string format = !inv.format.empty() ? inv.format : cfg.text("output.format", "");
    if (!format.empty() && format != "csv" && format != "json") throw ConfigError("output.format must be csv or json");
    RunOptions opts{inv.seed};
    if (inv.seed) report["seed"] = *inv.seed;
    CommandResult r = dispatch(cmd, cfg, opts);
    if (format.empty()) format = r.table ? "csv" : "json";
    const std::string text = render(r, format);
    if (out_path.empty())
      out << text;
    else
      write_file(out_path, text);
    report["summary"] = r.summary;
    report["warnings"] = r.warnings;
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    code = r.exit_code;
    return finish(code, code == kExitOk ? "" : "numeric check failed");
  } catch (const ConfigError& e) {
    return finish(kExitUsage, e.what());
  } catch (const std::invalid_argument& e) {
    return finish(kExitUsage, e.what());
  } catch (const NumericError& e) {
    return finish(kExitNumeric, e.what());
  } catch (const std::exception& e) {
    return finish(kExitNumeric, e.what());
  }
}

}  // namespace kreinlab::cli
