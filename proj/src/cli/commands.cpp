#include "kreinlab/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "kreinlab/extensions1d/extensions1d.hpp"
#include "kreinlab/grid2d/grid2d.hpp"
#include "kreinlab/interval1d/interval1d.hpp"
#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/spectral/spectral.hpp"

namespace kreinlab::cli {

namespace {

using interval::SturmLiouvilleProblem;
namespace sp = kreinlab::spectral;

Json fit_json(const num::FitResult& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"residual", f.residual_rms},
          {"window", {f.window_lo, f.window_hi}},
          {"points", f.points}};
}

interval::Coefficient polynomial(std::vector<double> c) {
  if (c.empty()) throw ConfigError("config: empty coefficient list");
  return [c = std::move(c)](double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  };
}

SturmLiouvilleProblem make_problem(const ScenarioConfig& cfg) {
  std::optional<double> shift;
  const std::string policy = cfg.text("problem.shift", "auto");
  if (policy != "auto") {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(policy.data(), policy.data() + policy.size(), v);
    if (ec != std::errc() || p != policy.data() + policy.size() || !std::isfinite(v))
      throw ConfigError("config: 'problem.shift' must be 'auto' or a number");
    shift = v;
  }
  if (cfg.has("problem.preset")) {
    for (const char* k : {"problem.p", "problem.q", "problem.x0", "problem.x1"})
      if (cfg.has(k)) throw ConfigError(std::string("config: '") + k + "' conflicts with problem.preset");
    const std::string name = cfg.text("problem.preset");
    if (name == "interval-unit") {
      if (!shift) return SturmLiouvilleProblem::unit_interval();
      return {[](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, 1.0, shift};
    }
    if (name == "interval-variable")
      return {[](double x) { return 1.0 + x * x; }, [](double x) { return 3.0 * std::cos(2.0 * x); }, 0.0, 1.5, shift};
    throw ConfigError("config: unknown problem.preset '" + name + "'");
  }
  const auto p = cfg.has("problem.p") ? cfg.real_list("problem.p") : std::vector<double>{1.0};
  const auto q = cfg.has("problem.q") ? cfg.real_list("problem.q") : std::vector<double>{0.0};
  const double x0 = cfg.real("problem.x0", 0.0);
  const double x1 = cfg.real("problem.x1", 1.0);
  if (!(x1 > x0)) throw ConfigError("config: need problem.x0 < problem.x1");
  return {polynomial(p), polynomial(q), x0, x1, shift};
}

ext::BoundaryConditionSpec make_spec(const ScenarioConfig& cfg, const SturmLiouvilleProblem& pr) {
  const std::string kind = cfg.text("extension.kind", "krein");
  if (kind == "dirichlet") return ext::BoundaryConditionSpec::dirichlet();
  if (kind == "krein") return ext::krein_bcspec(pr, cfg.real("extension.a"));
  if (kind == "full") {
    const auto l = cfg.real_list("extension.L");
    if (l.size() != 3) throw ConfigError("config: extension.L expects L11, L12, L22");
    return ext::BoundaryConditionSpec::full(num::SymMatrix{{l[0], l[1]}, {l[1], l[2]}});
  }
  if (kind == "rank-one") {
    const auto d = cfg.real_list("extension.direction");
    if (d.size() != 2) throw ConfigError("config: extension.direction expects two entries");
    const double n = std::hypot(d[0], d[1]);
    if (n == 0.0) throw ConfigError("config: extension.direction is zero");
    return ext::BoundaryConditionSpec::rank_one({d[0] / n, d[1] / n}, cfg.real("extension.ell"));
  }
  throw ConfigError("config: unknown extension.kind '" + kind + "'");
}

std::vector<double> mu_grid(const ScenarioConfig& cfg) {
  if (cfg.has("sweep.mu")) {
    for (const char* k : {"sweep.mu_start", "sweep.mu_stop", "sweep.mu_factor"})
      if (cfg.has(k)) throw ConfigError(std::string("config: '") + k + "' conflicts with sweep.mu");
    auto mus = cfg.real_list("sweep.mu");
    if (mus.empty()) throw ConfigError("config: sweep.mu is empty");
    return mus;
  }
  const double start = cfg.real("sweep.mu_start");
  const double stop = cfg.real("sweep.mu_stop");
  const double factor = cfg.real("sweep.mu_factor", 2.0);
  if (!(start < 0.0) || !(stop < start) || !(factor > 1.0))
    throw ConfigError("config: need mu_stop < mu_start < 0 and mu_factor > 1");
  std::vector<double> mus;
  for (double m = start; m >= stop * (1.0 + 1e-12); m *= factor) mus.push_back(m);
  return mus;
}

void check_decreasing(const std::vector<double>& mus, double bound) {
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (!(mus[i] < bound))
      throw ConfigError("gmu-scan: mu = " + format_number(mus[i]) + " is not below m(A_gamma) = " + format_number(bound));
    if (i > 0 && !(mus[i] < mus[i - 1])) throw ConfigError("gmu-scan: mu grid must be strictly decreasing");
  }
}

std::function<double(double)> test_function(const std::string& name, const SturmLiouvilleProblem& pr) {
  const double x0 = pr.x0(), len = pr.length();
  if (name == "sin-pi") return [=](double x) { return std::sin(std::numbers::pi * (x - x0) / len); };
  if (name == "one-minus-x") return [=](double x) { return 1.0 - (x - x0) / len; };
  if (name == "x-squared") return [=](double x) { return (x - x0) * (x - x0) / (len * len); };
  throw ConfigError("config: unknown resolvent.f '" + name + "'");
}

std::vector<double> read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("weyl-fit: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("weyl-fit: empty CSV");
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string c;
    while (std::getline(hs, c, ',')) header.push_back(c);
  }
  const auto it = std::find(header.begin(), header.end(), "eigenvalue");
  if (it == header.end()) throw ConfigError("weyl-fit: CSV header lacks an 'eigenvalue' column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (cells.size() != header.size())
      throw ConfigError("weyl-fit: line " + std::to_string(lineno) + " has the wrong number of fields");
    double v = 0.0;
    const auto& s = cells[col];
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
      throw ConfigError("weyl-fit: line " + std::to_string(lineno) + " has a malformed eigenvalue");
    values.push_back(v);
  }
  return values;
}

num::SymMatrix random_sym(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  num::SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, g(rng));
  return m;
}

int positive_int(double v, const char* key) {
  if (v < 1.0 || v != std::floor(v) || v > 64.0) throw ConfigError(std::string("config: '") + key + "' entries must be integers in 1..64");
  return static_cast<int>(v);
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell(const Json& v) {
  if (v.is_null()) return {};
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\n";
  }
  return out;
}

std::string summary_csv(const Json& summary) {
  Table t{{"key", "value"}, {}};
  for (const auto& [k, v] : summary.items()) t.rows.push_back({k, cell(v)});
  return to_csv(t);
}

CommandResult cmd_dirichlet(const ScenarioConfig& cfg) {
  const auto pr = make_problem(cfg);
  const auto count = cfg.integer("sweep.count", 10);
  if (count < 0 || count > 100000) throw ConfigError("config: sweep.count must lie in 0..100000");
  const auto ev = count == 0 ? std::vector<double>{} : interval::dirichlet_eigenvalues(pr, static_cast<int>(count));
  CommandResult r;
  r.table = Table{{"index", "eigenvalue"}, {}};
  for (std::size_t j = 0; j < ev.size(); ++j) r.table->rows.push_back({j + 1, ev[j]});
  r.summary = {{"count", ev.size()}, {"shift", pr.shift()}, {"interval", {pr.x0(), pr.x1()}}};
  return r;
}

CommandResult cmd_krein1d(const ScenarioConfig& cfg) {
  const auto pr = make_problem(cfg);
  const double a = cfg.real("extension.a", 0.0);
  const double lo = cfg.real("sweep.lo", 1.0);
  const double hi = cfg.real("sweep.hi", 150.0);
  if (!(hi > lo)) throw ConfigError("config: need sweep.lo < sweep.hi");
  const std::string method = cfg.text("sweep.method", "all");
  if (method != "all" && method != "shooting" && method != "reduction" && method != "buckling")
    throw ConfigError("config: sweep.method must be shooting, reduction, buckling or all");
  if (method == "buckling" && a != 0.0) throw ConfigError("krein1d: the buckling pipeline requires a = 0");

  std::vector<std::pair<std::string, std::vector<double>>> cols;
  CommandResult r;
  if (method == "all" || method == "shooting")
    cols.emplace_back("shooting", ext::realization_eigenvalues(pr, ext::krein_bcspec(pr, a), lo, hi).eigenvalues);
  if (method == "all" || method == "reduction") {
    const auto red = ext::reduction_eigenvalues(pr, a, lo, hi);
    if (red.a_is_root) r.warnings.push_back("reduction: the scan function vanishes at lambda = a");
    cols.emplace_back("reduction", red.eigenvalues);
  }
  if ((method == "all" && a == 0.0) || method == "buckling")
    cols.emplace_back("buckling", ext::buckling_eigenvalues(pr, lo, hi));

  std::size_t rows = 0;
  bool same = true;
  for (const auto& [name, v] : cols) {
    if (rows != 0 && v.size() != rows) same = false;
    rows = std::max(rows, v.size());
  }
  r.table = Table{{"index"}, {}};
  for (const auto& [name, v] : cols) r.table->columns.push_back(name);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<Json> row{i + 1};
    for (const auto& [name, v] : cols) row.push_back(i < v.size() ? Json(v[i]) : Json());
    r.table->rows.push_back(std::move(row));
  }
  Json dis;
  if (cols.size() > 1 && same) {
    double m = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t c = 1; c < cols.size(); ++c) m = std::max(m, std::abs(cols[c].second[i] - cols[0].second[i]));
    dis = m;
  } else if (cols.size() > 1) {
    r.warnings.push_back("pipelines returned different eigenvalue counts");
    r.exit_code = kExitNumeric;
  }
  Json counts = Json::object();
  for (const auto& [name, v] : cols) counts[name] = v.size();
  r.summary = {{"a", a}, {"window", {lo, hi}}, {"method", method}, {"counts", counts}, {"max_disagreement", dis}};
  return r;
}

CommandResult cmd_resolvent_check(const ScenarioConfig& cfg) {
  const auto pr = make_problem(cfg);
  const auto spec = make_spec(cfg, pr);
  const auto names = cfg.has("resolvent.f") ? cfg.text_list("resolvent.f")
                                            : std::vector<std::string>{"sin-pi", "one-minus-x", "x-squared"};
  CommandResult r;
  r.table = Table{{"f", "residual"}, {}};
  double worst = 0.0;
  for (const auto& name : names) {
    const auto res = ext::krein_resolvent_check(pr, spec, test_function(name, pr));
    r.table->rows.push_back({name, res.residual});
    worst = std::max(worst, res.residual);
  }
  r.summary = {{"kind", cfg.text("extension.kind", "krein")}, {"max_residual", worst}, {"functions", names.size()}};
  return r;
}

CommandResult cmd_gmu_scan(const ScenarioConfig& cfg) {
  const std::string model = cfg.text("sweep.model", "interval");
  const auto mus = mu_grid(cfg);
  std::optional<std::pair<double, double>> window;
  if (cfg.has("sweep.fit_lo") || cfg.has("sweep.fit_hi"))
    window = std::pair{cfg.real("sweep.fit_lo"), cfg.real("sweep.fit_hi")};
  CommandResult r;
  r.table = Table{{"mu", "m_gmu"}, {}};
  std::optional<num::FitResult> fit;
  double bound = 0.0;
  if (model == "interval") {
    const auto pr = make_problem(cfg);
    bound = pr.lambda1();
    check_decreasing(mus, bound);
    const auto scan = ext::gmu_scan(pr, mus, window);
    for (const auto& row : scan.rows) r.table->rows.push_back({row.mu, row.m_gmu});
    fit = scan.fit;
  } else if (model == "grid") {
    const int m1 = static_cast<int>(cfg.integer("grid.m1", 24));
    const int m2 = static_cast<int>(cfg.integer("grid.m2", m1));
    const double c = cfg.real("grid.potential", 0.0);
    const auto g = grid::build_model(m1, m2, [c](double, double) { return c; });
    bound = g.lambda_min;
    check_decreasing(mus, bound);
    const auto rows = grid::gmu_grid_scan(g, grid::harmonic_basis(g), mus);
    std::vector<double> t, v;
    for (const auto& row : rows) {
      r.table->rows.push_back({row.mu, row.m_gmu});
      const double am = std::abs(row.mu);
      if (row.mu < 0.0 && row.m_gmu > 0.0 && (!window || (am >= window->first && am <= window->second))) {
        t.push_back(am);
        v.push_back(row.m_gmu);
      }
    }
    if (t.size() >= 3) fit = num::loglog_fit(t, v);
  } else {
    throw ConfigError("config: sweep.model must be interval or grid");
  }
  if (!fit) r.warnings.push_back("fewer than three usable rows; no slope fit");
  r.summary = {{"model", model}, {"m_A_gamma", bound}, {"rows", mus.size()}, {"fit", fit ? fit_json(*fit) : Json()}};
  return r;
}

CommandResult cmd_grid2d_spectrum(const ScenarioConfig& cfg) {
  const int m1 = static_cast<int>(cfg.integer("grid.m1", 24));
  const int m2 = static_cast<int>(cfg.integer("grid.m2", m1));
  const double a = cfg.real("grid.a", -1.0);
  if (a == 0.0) throw ConfigError("grid2d-spectrum: a = 0 is not supported on the grid");
  const double r0 = cfg.real("grid.r", a < 0.0 ? 1.0 : a + 1.0);
  if (!(r0 > a)) throw ConfigError("grid2d-spectrum: need grid.r > grid.a");
  const double radius = cfg.real("grid.radius", 0.05);
  const double c = cfg.real("grid.potential", 0.0);
  const auto g = grid::build_model(m1, m2, [c](double, double) { return c; });
  const auto hb = grid::harmonic_basis(g);
  const auto rep = grid::spectrum_and_cluster(g, hb, a, r0, radius);
  CommandResult r;
  r.table = Table{{"index", "eigenvalue"}, {}};
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) r.table->rows.push_back({i + 1, rep.eigenvalues[i]});
  const double t_end = 0.2 * g.lambda_max;
  const double area = (m1 + 1) * g.h * (m2 + 1) * g.h;
  const auto count = std::count_if(rep.above_r.begin(), rep.above_r.end(), [t_end](double l) { return l <= t_end; });
  r.summary = {{"m1", m1},
               {"m2", m2},
               {"d", g.d},
               {"boundary_count", g.b},
               {"a", a},
               {"r", r0},
               {"radius", radius},
               {"lambda_min", g.lambda_min},
               {"lambda_max", g.lambda_max},
               {"cluster_count", rep.cluster_count},
               {"above_r", rep.above_r.size()},
               {"weyl_ratio_at_0.2_lambda_max", static_cast<double>(count) / (sp::weyl_constant(2, 1, area) * t_end)}};
  const std::string sn = cfg.text("grid.snumbers", "false");
  if (sn != "true" && sn != "false") throw ConfigError("config: grid.snumbers must be true or false");
  if (sn == "true") {
    const int jl = static_cast<int>(cfg.integer("grid.j_lo", 10));
    const int jh = static_cast<int>(cfg.integer("grid.j_hi", 100));
    const auto s = grid::boundary_s_numbers(g, hb);
    r.summary["s_number_fit"] = fit_json(grid::snumber_slope(s, jl, jh));
  }
  return r;
}

CommandResult cmd_weyl_fit(const ScenarioConfig& cfg) {
  auto values = read_spectrum_csv(cfg.text("weyl.spectrum"));
  const int n = static_cast<int>(cfg.integer("weyl.n", 1));
  const int m = static_cast<int>(cfg.integer("weyl.m", 1));
  double c_A = 0.0;
  if (cfg.has("weyl.c_A")) {
    if (cfg.has("weyl.volume")) throw ConfigError("config: give weyl.c_A or weyl.volume, not both");
    c_A = cfg.real("weyl.c_A");
  } else {
    c_A = sp::weyl_constant(n, m, cfg.real("weyl.volume"));
  }
  const double r0 = cfg.real("weyl.r", 0.0);
  const double t_lo = cfg.real("weyl.t_lo");
  const double t_hi = cfg.real("weyl.t_hi");
  const int samples = static_cast<int>(cfg.integer("weyl.samples", 64));
  const auto seq = sp::EigenSequence::ascending(std::move(values));
  const auto f = sp::remainder_fit(seq, c_A, n, m, r0, t_lo, t_hi, samples);
  const double ratio =
      static_cast<double>(sp::counting_function(seq, r0, t_hi)) / (c_A * std::pow(t_hi, n / (2.0 * m)));
  CommandResult r;
  r.summary = {{"c_A", c_A},
               {"ratio_at_window_end", ratio},
               {"remainder_slope", f.fit ? Json(f.fit->slope) : Json()},
               {"remainder", f.bounded ? "bounded" : "growing"},
               {"max_remainder", f.max_remainder},
               {"o_bound_holds", f.o_bound_holds},
               {"window", {t_lo, t_hi}},
               {"r", r0}};
  return r;
}

CommandResult cmd_kyfan(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto trials = cfg.integer("kyfan.trials", 200);
  const auto dim = cfg.integer("kyfan.dim", 30);
  if (trials < 1 || dim < 1 || dim > 2000) throw ConfigError("config: kyfan.trials >= 1 and 1 <= kyfan.dim <= 2000");
  const std::uint64_t seed = opts.seed ? *opts.seed : static_cast<std::uint64_t>(cfg.integer("kyfan.seed", 0));
  std::mt19937_64 rng(seed);
  std::size_t checked = 0, violations = 0, k_checked = 0, k_violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto b = random_sym(rng, static_cast<std::size_t>(dim));
    const auto s = random_sym(rng, static_cast<std::size_t>(dim));
    const auto rep = sp::kyfan_check(b, s);
    checked += rep.checked;
    violations += rep.violations;
    k_checked += rep.k_checked;
    k_violations += rep.k_violations;
    worst = std::min(worst, rep.worst_margin);
  }
  CommandResult r;
  r.summary = {{"trials", trials},     {"dim", dim},
               {"seed", seed},         {"checked", checked},
               {"violations", violations}, {"k_checked", k_checked},
               {"k_violations", k_violations}, {"worst_margin", worst}};
  if (violations + k_violations > 0) r.exit_code = kExitNumeric;
  return r;
}

CommandResult cmd_asymptotics(const ScenarioConfig& cfg) {
  const auto ms = cfg.has("asymptotics.m") ? cfg.real_list("asymptotics.m") : std::vector<double>{1, 2};
  const auto ns = cfg.has("asymptotics.n") ? cfg.real_list("asymptotics.n") : std::vector<double>{1, 2, 3};
  const auto n_max = cfg.integer("asymptotics.N_max", 6);
  if (n_max < 1 || n_max > 64) throw ConfigError("config: asymptotics.N_max must lie in 1..64");
  CommandResult r;
  r.table = Table{{"m", "n", "N", "alpha", "beta", "gamma", "theta_N", "beta_prime", "target", "legacy_theta"}, {}};
  bool consistent = true;
  for (double mv : ms)
    for (double nv : ns) {
      const int m = positive_int(mv, "asymptotics.m");
      const int n = positive_int(nv, "asymptotics.n");
      for (int N = 1; N <= n_max; ++N) {
        const sp::Rational alpha(2 * m * N, n), beta(2 * m * N + 1, n);
        const auto gamma = n == 1 ? std::nullopt : std::optional(sp::Rational(2 * m * N, n - 1));
        const auto th = sp::theta_exponents(m, n, N);
        const auto bp = sp::perturbation_exponent(alpha, beta, gamma);
        const auto target = (sp::Rational(2 * m * N) + th.theta_N) / sp::Rational(n);
        consistent = consistent && bp == target;
        r.table->rows.push_back({m, n, N, alpha.str(), beta.str(), gamma ? Json(gamma->str()) : Json("inf"),
                                 th.theta_N.str(), bp.str(), target.str(),
                                 th.legacy_theta ? Json(th.legacy_theta->str()) : Json()});
      }
    }
  r.summary = {{"rows", r.table->rows.size()}, {"all_consistent", consistent}};
  if (!consistent) r.exit_code = kExitNumeric;
  return r;
}

}  // namespace kreinlab::cli
