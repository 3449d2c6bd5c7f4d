#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "kreinlab/numkernel/eigen.hpp"
#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/fit.hpp"
#include "kreinlab/numkernel/matrix.hpp"
#include "kreinlab/numkernel/ode.hpp"
#include "kreinlab/numkernel/quadrature.hpp"
#include "kreinlab/numkernel/roots.hpp"
#include "kreinlab/numkernel/sampled_function.hpp"

using namespace kreinlab;
using namespace kreinlab::num;

namespace {

SymMatrix random_sym(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, g(rng));
  return a;
}

SymMatrix random_spd(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix b(n, n);
  for (double& x : b.data()) x = g(rng);
  SymMatrix m = congruence(SymMatrix::identity(n), b);
  for (std::size_t i = 0; i < n; ++i) m.add(i, i, 0.5);
  return m;
}

// Number of negative pivots of A − xM without pivoting (Sylvester inertia);
// equals the number of pencil eigenvalues below x when no pivot vanishes.
int count_below(const SymMatrix& a, const SymMatrix& m, double x) {
  const std::size_t n = a.dim();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = a(i, j) - x * m(i, j);
  int neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double piv = w[k * n + k];
    if (piv == 0.0) piv = 1e-300;
    if (piv < 0.0) ++neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = w[i * n + k] / piv;
      for (std::size_t j = k + 1; j < n; ++j) w[i * n + j] -= f * w[k * n + j];
    }
  }
  return neg;
}

double bisect_eigen(const SymMatrix& a, const SymMatrix& m, int index, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (count_below(a, m, mid) > index ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double airy_series(double x) {
  std::vector<double> c(200, 0.0);
  c[0] = 1.0;
  for (std::size_t k = 3; k < c.size(); ++k) c[k] = c[k - 3] / (static_cast<double>(k) * (k - 1));
  double s = 0.0;
  double p = 1.0;
  for (double ck : c) {
    s += ck * p;
    p *= x;
  }
  return s;
}

}  // namespace

TEST_CASE("sym_eigen basic spectra") {
  auto e = sym_eigen(SymMatrix::diagonal(std::vector<double>{3, 1, 2}));
  CHECK(e.eigenvalues == std::vector<double>{1, 2, 3});
  auto s = sym_eigen(SymMatrix{{0, 1}, {1, 0}});
  CHECK(s.eigenvalues[0] == doctest::Approx(-1).epsilon(1e-15));
  CHECK(s.eigenvalues[1] == doctest::Approx(1).epsilon(1e-15));
  CHECK(sym_eigen(SymMatrix(0)).eigenvalues.empty());
}

TEST_CASE("sym_eigen matches inertia counts in random intervals") {
  std::mt19937_64 rng(11);
  const SymMatrix a = random_sym(50, rng);
  const auto ev = sym_eigen(a).eigenvalues;
  const SymMatrix id = SymMatrix::identity(50);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int k = 0; k < 20; ++k) {
    double x = u(rng);
    double y = u(rng);
    if (x > y) std::swap(x, y);
    const int oracle = count_below(a, id, y) - count_below(a, id, x);
    int counted = 0;
    for (double l : ev) counted += (l >= x && l < y);
    CHECK(counted == oracle);
  }
}

TEST_CASE("sym_eigen residuals, orthogonality and reconstruction") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u, 7u, 40u, 200u}) {
    const SymMatrix a = random_sym(n, rng);
    const auto e = sym_eigen(a);
    const double na = frobenius_norm(a);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.eigenvalues[k] >= e.eigenvalues[k - 1]);
    Matrix rec(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = e.eigenvectors.column(k);
      const auto av = a.full() * std::span<const double>(v);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(av[i] - e.eigenvalues[k] * v[i]));
      CHECK(r <= 1e-10 * na);
      for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(dot(v, e.eigenvectors.column(j))) <= 1e-10);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rec(i, j) += e.eigenvalues[k] * v[i] * v[j];
    }
    CHECK(frobenius_norm(rec - a.full()) <= 1e-9 * na);
  }
}

TEST_CASE("sym_eigen budget exhaustion raises ConvergenceError") {
  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(sym_eigen(random_sym(30, rng), 1), ConvergenceError);
}

TEST_CASE("sym_eigenvalues agrees with Jacobi") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {1u, 2u, 3u, 25u, 120u}) {
    const SymMatrix a = random_sym(n, rng);
    const auto j = sym_eigen(a).eigenvalues;
    const auto q = sym_eigenvalues(a);
    REQUIRE(q.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(j[k] - q[k]) <= 1e-11 * frobenius_norm(a));
  }
}

TEST_CASE("min-max: constrained power iteration reproduces descending eigenvalues") {
  std::mt19937_64 rng(23);
  const std::size_t n = 20;
  const SymMatrix q = random_sym(n, rng);
  const auto e = sym_eigen(q);
  const double shift = frobenius_norm(q);
  std::normal_distribution<double> g;
  for (std::size_t l = 1; l <= 5; ++l) {
    auto project = [&](std::vector<double>& u) {
      for (std::size_t j = 0; j + 1 < l; ++j) {
        const auto v = e.eigenvectors.column(n - 1 - j);
        const double c = dot(u, v);
        for (std::size_t i = 0; i < n; ++i) u[i] -= c * v[i];
      }
      const double nu = norm2(u);
      for (double& x : u) x /= nu;
    };
    std::vector<double> u(n);
    for (double& x : u) x = g(rng);
    project(u);
    double rq = 0.0;
    for (int it = 0; it < 40000; ++it) {
      auto w = q.full() * std::span<const double>(u);
      rq = dot(w, u);
      for (std::size_t i = 0; i < n; ++i) w[i] += shift * u[i];
      u = std::move(w);
      project(u);
    }
    CHECK(std::abs(rq - e.eigenvalues[n - l]) <= 1e-8);
  }
}

TEST_CASE("gen_eigen pencils") {
  auto d = gen_eigen(SymMatrix::diagonal(std::vector<double>{2, 6}), SymMatrix::diagonal(std::vector<double>{1, 2}));
  CHECK(d[0] == doctest::Approx(2).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(3).epsilon(1e-14));

  std::mt19937_64 rng(29);
  const SymMatrix m = random_spd(6, rng);
  for (double v : gen_eigen(m, m)) CHECK(v == doctest::Approx(1).epsilon(1e-12));

  const SymMatrix a = random_sym(12, rng);
  const auto plain = sym_eigen(a).eigenvalues;
  const auto pen = gen_eigen(a, SymMatrix::identity(12));
  for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(plain[k] - pen[k]) <= 1e-10);

  CHECK_THROWS_AS(gen_eigen(a, SymMatrix::diagonal(std::vector<double>(12, -1.0))), SingularSolveError);
  CHECK(std::isinf(pencil_min(SymMatrix(0), SymMatrix(0))));
}

TEST_CASE("gen_eigen matches bisection on the determinant sign sequence") {
  std::mt19937_64 rng(31);
  const SymMatrix a = random_sym(20, rng);
  const SymMatrix m = random_spd(20, rng);
  const auto nu = gen_eigen(a, m);
  for (int k = 0; k < 20; ++k) {
    const double oracle = bisect_eigen(a, m, k, -1e4, 1e4);
    CHECK(std::abs(nu[k] - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
  }
}

TEST_CASE("solve_ode_ivp closed forms") {
  auto expo = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
  std::vector<double> one{1.0};
  auto e = solve_ode_ivp(expo, one, 0.0, 1.0);
  CHECK(std::abs(e.back()[0] - std::numbers::e) <= 1e-10);

  auto osc = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  std::vector<double> init{0.0, 1.0};
  auto s = solve_ode_ivp(osc, init, 0.0, std::numbers::pi);
  CHECK(std::abs(s.back()[0]) <= 1e-9);
  CHECK(s.grid.front() == 0.0);
  CHECK(s.grid.back() == std::numbers::pi);

  auto airy = [](double x, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = x * y[0];
  };
  std::vector<double> ai{1.0, 0.0};
  auto a = solve_ode_ivp(airy, ai, 0.0, 1.0);
  CHECK(std::abs(a.back()[0] - airy_series(1.0)) <= 1e-8);

  OdeOptions tight;
  tight.max_steps = 128;
  tight.rel_tol = 1e-30;
  CHECK_THROWS_AS(solve_ode_ivp(expo, one, 0.0, 1.0, tight), ConvergenceError);
}

TEST_CASE("integrate_rk4 renormalization keeps growth finite") {
  const double s = 1000.0;
  auto grow = [s](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = s * s * y[0];
  };
  std::vector<double> init{0.0, 1.0};
  auto sol = integrate_rk4(grow, init, 0.0, 1.0, rk4_steps(s, 1.0, 1e-12), false, true);
  // u = sinh(s x)/s, so log u(1) = s − log(2s) up to e^{−2s}.
  const double logu = std::log(sol.back()[0]) + sol.log_scale;
  CHECK(std::abs(logu - (s - std::log(2.0 * s))) <= 1e-9 * s);
}

TEST_CASE("find_roots_bracketed") {
  auto r = find_roots_bracketed([](double x) { return std::sin(x); }, 1.0, 7.0, 64);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - std::numbers::pi) <= 1e-10 * std::numbers::pi);
  CHECK(std::abs(r[1] - 2 * std::numbers::pi) <= 2e-10 * std::numbers::pi);
  CHECK(find_roots_bracketed([](double) { return 1.0; }, 0.0, 1.0, 10).empty());
  CHECK_THROWS(find_roots_bracketed([](double x) { return x; }, 0.0, 1.0, 1));
}

TEST_CASE("buckling determinant roots against interval halving") {
  auto f = [](double w) { return 2.0 - 2.0 * std::cos(w) - w * std::sin(w); };
  auto r = find_roots_bracketed(f, 1.0, 13.0, 400);
  REQUIRE(r.size() == 3);
  // Independent oracle: plain interval halving on brackets from a fine scan.
  std::vector<double> oracle;
  const int n = 12000;
  for (int i = 0; i < n; ++i) {
    double a = 1.0 + 12.0 * i / n;
    double b = 1.0 + 12.0 * (i + 1) / n;
    if (f(a) * f(b) > 0) continue;
    for (int k = 0; k < 100; ++k) {
      const double m = 0.5 * (a + b);
      (f(a) * f(m) <= 0 ? b : a) = m;
    }
    oracle.push_back(0.5 * (a + b));
  }
  REQUIRE(oracle.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r[k] - oracle[k]) <= 1e-10 * oracle[k]);
  CHECK(r[0] == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  CHECK(std::abs(std::tan(r[1] / 2) - r[1] / 2) <= 1e-8);
  CHECK(r[2] == doctest::Approx(4 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("root finder recovers simple roots of random polynomials") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> deg(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> roots;
    const int d = deg(rng);
    while (static_cast<int>(roots.size()) < d) {
      const double x = u(rng);
      bool ok = true;
      for (double r : roots) ok = ok && std::abs(r - x) > 0.5;
      if (ok) roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    auto p = [&](double x) {
      double v = 1.0;
      for (double r : roots) v *= (x - r);
      return v;
    };
    const auto found = find_roots_bracketed(p, -11.0, 11.0, 256);
    REQUIRE(found.size() == roots.size());
    for (std::size_t k = 0; k < roots.size(); ++k) CHECK(std::abs(found[k] - roots[k]) <= 1e-9);
  }
}

TEST_CASE("tangential detection finds double and close roots") {
  RootScanOptions opt;
  opt.detect_tangential = true;
  auto dbl = find_roots_bracketed([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 2.0, 31, opt);
  REQUIRE(dbl.size() == 2);
  CHECK(std::abs(dbl[0] - 0.3) <= 1e-6);
  auto pair = find_roots_bracketed([](double x) { return (x - 0.52) * (x - 0.5201); }, 0.0, 1.0, 11, opt);
  REQUIRE(pair.size() == 2);
  CHECK(std::abs(pair[0] - 0.52) <= 1e-10);
  CHECK(std::abs(pair[1] - 0.5201) <= 1e-10);
  auto none = find_roots_bracketed([](double x) { return (x - 0.5) * (x - 0.5) + 1.0; }, 0.0, 1.0, 11, opt);
  CHECK(none.empty());
}

TEST_CASE("quadrature") {
  CHECK(quadrature([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  // Antiderivative x²/2 − x³/3.
  CHECK(quadrature([](double x) { return (1 - x) * x; }, 0.0, 1.0) == doctest::Approx(0.5 - 1.0 / 3).epsilon(1e-14));
  CHECK(quadrature([](double x) { return std::pow(std::sin(std::numbers::pi * x), 2); }, 0.0, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(quadrature([](double x) { return std::sin(2 * std::numbers::pi * x); }, 0.0, 1.0)) <= 1e-14);
  QuadratureOptions o;
  o.max_panels = 8;
  CHECK_THROWS_AS(quadrature([](double x) { return std::sqrt(std::abs(x)); }, -1.0, 1.0, o), ConvergenceError);
}

TEST_CASE("sampled functions and inner products") {
  auto f = SampledFunction::from_callback([](double x) { return std::sin(x); }, 0.0, 2.0, 200,
                                          [](double x) { return std::cos(x); });
  CHECK(std::abs(f(1.234) - std::sin(1.234)) <= 1e-9);
  CHECK(std::abs(f.derivative(0.77) - std::cos(0.77)) <= 1e-6);
  CHECK(f.lo() == 0.0);
  CHECK(f.hi() == 2.0);
  const double ip = inner_product(f, f);
  CHECK(std::abs(ip - (1.0 - std::sin(4.0) / 4.0)) <= 1e-10);
  auto lin = SampledFunction::from_callback([](double x) { return x; }, 0.0, 2.0, 7);
  CHECK(std::abs(inner_product(f, lin) - (std::sin(2.0) - 2.0 * std::cos(2.0))) <= 1e-10);
  CHECK(std::abs(inner_product(f, [](double x) { return x; }) - (std::sin(2.0) - 2.0 * std::cos(2.0))) <= 1e-10);
  CHECK_THROWS(SampledFunction({0.0, 0.0}, {1.0, 1.0}));
}

TEST_CASE("loglog_fit") {
  std::vector<double> t, y;
  for (int i = 1; i <= 10; ++i) {
    t.push_back(i);
    y.push_back(double(i) * i);
  }
  auto r = loglog_fit(t, y);
  CHECK(std::abs(r.slope - 2.0) <= 1e-12);
  CHECK(r.residual_rms >= 0.0);
  CHECK(r.window_lo == 1.0);
  CHECK(r.window_hi == 10.0);

  std::vector<double> ys;
  for (double x : t) ys.push_back(2.0 * std::sqrt(x));
  auto h = loglog_fit(t, ys);
  CHECK(std::abs(h.slope - 0.5) <= 1e-12);
  CHECK(std::abs(h.intercept - std::log(2.0)) <= 1e-12);

  std::vector<double> tt, yy;
  for (double x = 1e3; x <= 1e6 * 1.0001; x *= std::sqrt(10.0)) {
    tt.push_back(x);
    yy.push_back(x + 10.0);
  }
  auto w = loglog_fit(tt, yy, 1e3, 1e6 * 1.0001);
  CHECK(w.slope >= 0.99);
  CHECK(w.slope <= 1.01);
  CHECK_THROWS(loglog_fit(t, y, 1.0, 2.0));
}
