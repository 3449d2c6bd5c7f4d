// Acceptance suite: one PASS/FAIL line per criterion with measured values
// and wall time. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kreinlab/extensions1d/extensions1d.hpp"
#include "kreinlab/grid2d/grid2d.hpp"
#include "kreinlab/interval1d/interval1d.hpp"
#include "kreinlab/numkernel/eigen.hpp"
#include "kreinlab/spectral/spectral.hpp"

using namespace kreinlab;
namespace sp = kreinlab::spectral;

namespace {

constexpr double pi = std::numbers::pi;

struct Check {
  std::string what;
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  std::vector<Check> checks;
  void add(std::string what, bool ok, std::string detail) { checks.push_back({std::move(what), ok, std::move(detail)}); }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.add("no exception", false, e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0) o.add("runtime", dt < budget_s, fmt("%.2f s", dt) + fmt(" (budget %.0f s)", budget_s));
  bool ok = true;
  for (const auto& c : o.checks) ok = ok && c.ok;
  if (!ok) ++failures;
  std::printf("%s %s: %s  [%.2f s]\n", ok ? "PASS" : "FAIL", id.c_str(), title.c_str(), dt);
  for (const auto& c : o.checks) std::printf("      %-4s %s: %s\n", c.ok ? "ok" : "FAIL", c.what.c_str(), c.detail.c_str());
  std::fflush(stdout);
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Closed form of m(G^μ) on the unit interval with s = √|μ|.
double gmu_closed_form(double mu) {
  const double s = std::sqrt(-mu);
  return std::min(2.0 * s * std::tanh(s / 2.0), 6.0 * (s / std::tanh(s / 2.0) - 2.0));
}

void grid_lab(Outcome& o, int m) {
  const auto g = grid::build_model(m, m);
  const auto hb = grid::harmonic_basis(g);
  const double a = -1.0, r = 1.0;
  const auto rep = grid::spectrum_and_cluster(g, hb, a, r, 0.05);
  o.add("(i) cluster within 0.05 of a", rep.cluster_count + 20 >= g.b,
        std::to_string(rep.cluster_count) + " eigenvalues, boundary count " + std::to_string(g.b));

  const auto seq = sp::EigenSequence::ascending(rep.eigenvalues);
  const double c_A = sp::weyl_constant(2, 1, 1.0);
  const double t_hi = 0.2 * g.lambda_max;
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k <= 64; ++k) {
    const double t = 50.0 * std::pow(t_hi / 50.0, k / 64.0);
    const double ratio = static_cast<double>(sp::counting_function(seq, r, t)) / (c_A * t);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const double end_ratio = static_cast<double>(sp::counting_function(seq, r, t_hi)) / (c_A * t_hi);
  o.add("(ii) Weyl ratio in [0.85, 1.15] for t in [50, 0.2 lambda_max]", lo >= 0.85 && hi <= 1.15,
        "range [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "], at t = 0.2 lambda_max: " + fmt("%.3f", end_ratio));

  const auto dc = grid::decompose(g, hb, a);
  const double slope = grid::snumber_slope(dc.S, 10, 100).slope;
  o.add("(iii) S s-number slope on [10, 100] in [-2.6, -1.6]", slope >= -2.6 && slope <= -1.6, fmt("%.3f", slope));
}

}  // namespace

int main() {
  const auto pr = interval::SturmLiouvilleProblem::unit_interval();

  criterion("1", "Dirichlet baseline (j pi)^2, j <= 20", 1.0, [&](Outcome& o) {
    const auto ev = interval::dirichlet_eigenvalues(pr, 20);
    double worst = 0.0;
    for (int j = 1; j <= 20; ++j) worst = std::max(worst, std::abs(ev[j - 1] / (j * j * pi * pi) - 1.0));
    o.add("count", ev.size() == 20, std::to_string(ev.size()));
    o.add("max relative error <= 1e-8", worst <= 1e-8, fmt("%.3e", worst));
  });

  criterion("2", "Krein-von Neumann extension: buckling vs shooting", 5.0, [&](Outcome& o) {
    const auto first = ext::buckling_eigenvalues(pr, 1);
    o.add("first positive eigenvalue = 4 pi^2 +- 1e-6", std::abs(first[0] - 4 * pi * pi) <= 1e-6,
          fmt("%.12f", first[0]) + fmt(" (error %.2e)", first[0] - 4 * pi * pi));
    const auto b = ext::buckling_eigenvalues(pr, 1.0, 150.0);
    const auto s = ext::realization_eigenvalues(pr, ext::krein_bcspec(pr, 0.0), 1.0, 150.0).eigenvalues;
    o.add("same count on (1, 150)", b.size() == s.size() && !b.empty(),
          std::to_string(b.size()) + " vs " + std::to_string(s.size()));
    const double d = max_rel_diff(b, s);
    o.add("shooting vs buckling <= 1e-8", b.size() == s.size() && d <= 1e-8, fmt("%.3e", d));
  });

  criterion("3", "Reduction vs shooting for a = -5, +5", 10.0, [&](Outcome& o) {
    for (double a : {-5.0, 5.0}) {
      const auto red = ext::reduction_eigenvalues(pr, a, 1.0, 150.0).eigenvalues;
      const auto sh = ext::realization_eigenvalues(pr, ext::krein_bcspec(pr, a), 1.0, 150.0).eigenvalues;
      const double d = max_rel_diff(red, sh);
      o.add(fmt("a = %+.0f", a), red.size() == sh.size() && !red.empty() && d <= 1e-6,
            std::to_string(red.size()) + " eigenvalues, max difference " + fmt("%.3e", d));
    }
  });

  criterion("4", "Krein resolvent identity", 1.0, [&](Outcome& o) {
    const auto sinpi = [](double x) { return std::sin(pi * x); };
    const auto r1 = ext::krein_resolvent_check(pr, ext::BoundaryConditionSpec::dirichlet(), sinpi);
    o.add("Dirichlet, sin(pi x)", r1.residual <= 1e-6, fmt("%.3e", r1.residual));
    const auto r2 = ext::krein_resolvent_check(pr, ext::krein_bcspec(pr, -5.0), sinpi);
    o.add("a = -5, sin(pi x)", r2.residual <= 1e-6, fmt("%.3e", r2.residual));
    const auto r3 = ext::krein_resolvent_check(pr, ext::krein_bcspec(pr, -5.0), [](double x) { return 1.0 - x; });
    o.add("a = -5, 1 - x", r3.residual <= 1e-6, fmt("%.3e", r3.residual));
  });

  criterion("5", "Growth of m(G^mu)", 5.0, [&](Outcome& o) {
    const auto one = ext::gmu_scan(pr, {-1e4});
    const double m = one.rows[0].m_gmu;
    o.add("m(G^{-1e4}) = 200.000 +- 1e-3", std::abs(m - 200.0) <= 1e-3,
          fmt("%.9f", m) + fmt(" (closed form %.9f)", gmu_closed_form(-1e4)));
    std::vector<double> mus;
    for (int k = 8; k <= 24; ++k) mus.push_back(-std::pow(10.0, k / 4.0));
    const auto scan = ext::gmu_scan(pr, mus, std::pair{1e2, 1e6});
    const double slope = scan.fit ? scan.fit->slope : NAN;
    o.add("slope over |mu| in [1e2, 1e6] within [0.45, 0.55]", slope >= 0.45 && slope <= 0.55, fmt("%.5f", slope));
  });

  criterion("6", "DtN difference against -mu (K^mu)* K", 2.0, [&](Outcome& o) {
    for (double mu : {-1.0, -1e2, -1e4}) {
      const auto d = ext::dtn_difference_check(pr, mu);
      o.add(fmt("mu = %g", mu), d.residual <= 1e-6 * d.q_norm,
            fmt("residual %.3e", d.residual) + fmt(", |Q| %.3e", d.q_norm));
    }
  });

  criterion("7", "Lower-bound certificates", 10.0, [&](Outcome& o) {
    const auto grid = ext::default_certificate_grid(pr);
    const num::SymMatrix m100{{-100.0, 0.0}, {0.0, -100.0}};
    const auto c = ext::lower_bound_certificate(pr, ext::BoundaryConditionSpec::full(m100), grid);
    const auto ev = ext::realization_eigenvalues(pr, ext::BoundaryConditionSpec::full(m100), -2e4, 10.0).eigenvalues;
    const bool finite = c.mu_star && std::isfinite(*c.mu_star);
    o.add("L = -100 I: finite and <= smallest eigenvalue", finite && !ev.empty() && *c.mu_star <= ev.front(),
          "mu* = " + (finite ? fmt("%.6f", *c.mu_star) : std::string("none")) + ", smallest eigenvalue " +
              (ev.empty() ? std::string("none") : fmt("%.6f", ev.front())));
    const num::SymMatrix spd{{3.0, 1.0}, {1.0, 2.0}};
    const auto spec = ext::BoundaryConditionSpec::full(spd);
    const auto cs = ext::lower_bound_certificate(pr, spec, grid);
    const double birman = ext::birman_bound(ext::tmu_form(pr, spec, 0.0).m_tmu, pr.lambda1());
    o.add("L SPD: certificate >= Birman bound - 1e-9", cs.mu_star && *cs.mu_star >= birman - 1e-9,
          "mu* = " + (cs.mu_star ? fmt("%.9f", *cs.mu_star) : std::string("none")) + fmt(", Birman %.9f", birman));
  });

  criterion("8", "Ky Fan suite, 200 random 30x30 pairs", 30.0, [&](Outcome& o) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    auto rnd = [&] {
      num::SymMatrix m(30);
      for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = i; j < 30; ++j) m.set(i, j, g(rng));
      return m;
    };
    std::size_t v = 0, kv = 0, checked = 0;
    double worst = INFINITY;
    for (int t = 0; t < 200; ++t) {
      const auto b = rnd();
      const auto s = rnd();
      const auto rep = sp::kyfan_check(b, s);
      v += rep.violations;
      kv += rep.k_violations;
      checked += rep.checked + rep.k_checked;
      worst = std::min(worst, rep.worst_margin);
    }
    o.add("zero violations", v == 0 && kv == 0,
          std::to_string(checked) + " inequalities, " + std::to_string(v + kv) + " violations, worst margin " +
              fmt("%.3e", worst));
  });

  criterion("9", "Perturbed diagonal model, dimension 500", 60.0, [&](Outcome& o) {
    constexpr int d = 500;
    std::mt19937_64 rng(11);
    std::bernoulli_distribution coin;
    std::vector<double> bd(d), sd(d);
    for (int j = 1; j <= d; ++j) {
      bd[j - 1] = 1.0 / j;
      sd[j - 1] = (coin(rng) ? 1.0 : -1.0) / (static_cast<double>(j) * j);
    }
    auto sum = num::SymMatrix::diagonal(bd);
    sum += num::SymMatrix::diagonal(sd);
    const auto mu = sp::EigenSequence::positive_part(num::sym_eigenvalues(sum));
    std::vector<double> scaled;
    for (int j = 1; j <= d; ++j) scaled.push_back(std::pow(j, 4.0 / 3.0) * std::abs(mu[j] - 1.0 / j));
    const auto blocks = sp::dyadic_block_maxima(scaled);
    const std::size_t n = blocks.size();
    double ratio = 0.0;
    for (std::size_t k = n - 2; k < n; ++k) ratio = std::max(ratio, blocks[k] / blocks[k - 1]);
    o.add("block-maxima ratio <= 2 over the top three blocks", ratio <= 2.0,
          fmt("max ratio %.3f", ratio) + fmt(" (top block max %.3e)", blocks.back()));
  });

  criterion("10", "Exponent tables", 0.0, [&](Outcome& o) {
    const auto t1 = sp::theta_exponents(1, 2, 1).theta_N;
    const auto t5 = sp::theta_exponents(1, 2, 5).theta_N;
    const auto bp = sp::perturbation_exponent(sp::Rational(1), sp::Rational(3, 2), sp::Rational(2));
    const auto legacy = sp::theta_exponents(1, 1, 1).legacy_theta;
    o.add("theta_1(1, 2) = 2/3", t1 == sp::Rational(2, 3), t1.str());
    o.add("theta_5(1, 2) = 10/11", t5 == sp::Rational(10, 11), t5.str());
    o.add("beta'(1, 1.5, 2) = 4/3", bp == sp::Rational(4, 3), bp.str());
    o.add("legacy theta(1, 1) = 1", legacy && *legacy == sp::Rational(1), legacy ? legacy->str() : "undefined");
  });

  criterion("11", "2D grid lab, M = 40, a = -1", 180.0, [&](Outcome& o) { grid_lab(o, 40); });
  criterion("11-ci", "2D grid lab, CI variant M = 24, a = -1", 30.0, [&](Outcome& o) { grid_lab(o, 24); });

  criterion("12", "Spectral shift round trip and order", 1.0, [&](Outcome& o) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> v(10000);
    for (double& x : v) x = u(rng);
    const double b = 37.5;
    const auto s = sp::spectral_shift(v, b);
    const auto back = sp::inverse_shift(s);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back[i] - v[i]));
    o.add("round trip <= 1e-12", worst <= 1e-12, fmt("%.3e", worst));
    std::vector<std::pair<double, double>> pos;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] > 0.0) pos.emplace_back(v[i], s.mapped[i]);
    std::sort(pos.begin(), pos.end());
    bool ordered = true;
    for (std::size_t i = 1; i < pos.size(); ++i) ordered = ordered && pos[i].second > pos[i - 1].second;
    o.add("order of positive values below b preserved", ordered, std::to_string(pos.size()) + " values");
  });

  criterion("13", "Counting remainder on the interval, t in (50, 5000)", 60.0, [&](Outcome& o) {
    const double c_A = sp::weyl_constant(1, 1, 1.0);
    const auto aa = ext::realization_eigenvalues(pr, ext::krein_bcspec(pr, -5.0), 0.0, 6000.0).eigenvalues;
    const auto fa = sp::remainder_fit(sp::EigenSequence::ascending(aa), c_A, 1, 1, 1.0, 50.0, 5000.0);
    o.add("a = -5: slope <= 0.25", fa.fit && fa.fit->slope <= 0.25,
          fmt("slope %.4f", fa.fit ? fa.fit->slope : NAN) + fmt(", max remainder %.3f", fa.max_remainder));
    const auto a0 = ext::buckling_eigenvalues(pr, 1.0, 6000.0);
    const auto f0 = sp::remainder_fit(sp::EigenSequence::ascending(a0), c_A, 1, 1, 1.0, 50.0, 5000.0);
    o.add("a = 0: slope <= 0.25", f0.fit && f0.fit->slope <= 0.25,
          fmt("slope %.4f", f0.fit ? f0.fit->slope : NAN) + fmt(", max remainder %.3f", f0.max_remainder));
  });

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
