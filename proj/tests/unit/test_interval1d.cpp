#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "kreinlab/interval1d/interval1d.hpp"
#include "kreinlab/numkernel/eigen.hpp"
#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/quadrature.hpp"

using namespace kreinlab;
using namespace kreinlab::interval;
using std::numbers::pi;

namespace {

// Eigenvalues of the symmetric tridiagonal matrix (diag d, offdiag e) below x,
// by the Sturm sequence of leading minors.
int tridiag_count(const std::vector<double>& d, double e, double x) {
  int c = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    q = d[i] - x - (i ? e * e / q : 0.0);
    if (q == 0.0) q = 1e-300;
    c += q < 0.0;
  }
  return c;
}

double max_dev(const num::SampledFunction& u, const std::function<double(double)>& exact) {
  double m = 0.0;
  for (double x : u.grid()) m = std::max(m, std::abs(u(x) - exact(x)));
  return m;
}

}  // namespace

TEST_CASE("problem construction and shift policy") {
  const auto unit = SturmLiouvilleProblem::unit_interval();
  CHECK(unit.shift() == 0.0);
  CHECK(unit.lambda1() == doctest::Approx(pi * pi).epsilon(1e-9));
  CHECK(unit.effective_length() == doctest::Approx(1.0).epsilon(1e-12));

  const SturmLiouvilleProblem neg([](double) { return 1.0; }, [](double) { return -20.0; }, 0.0, 1.0);
  CHECK(neg.shift() == doctest::Approx(21.0 - pi * pi).epsilon(1e-9));
  CHECK(neg.lambda1() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dirichlet_eigenvalues(neg, 1)[0] == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(SturmLiouvilleProblem([](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, 1.0, -20.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SturmLiouvilleProblem([](double x) { return x - 0.5; }, [](double) { return 0.0; }, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SturmLiouvilleProblem([](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("fundamental pair closed forms") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto f0 = fundamental_pair(pr, 0.0);
  CHECK(max_dev(f0.y1, [](double) { return 1.0; }) <= 1e-12);
  CHECK(max_dev(f0.y2, [](double x) { return x; }) <= 1e-12);
  const auto fp = fundamental_pair(pr, pi * pi);
  CHECK(std::abs(fp.trace2.gamma[1]) <= 1e-9);
  CHECK(max_dev(fp.y2, [](double x) { return std::sin(pi * x) / pi; }) <= 1e-10);
  const auto fm = fundamental_pair(pr, -1.0);
  CHECK(std::abs(fm.trace2.gamma[1] - std::sinh(1.0)) <= 1e-9);
  for (double l : {-400.0, -1.0, 0.0, 30.0, 900.0}) CHECK(fundamental_pair(pr, l).wronskian_deviation <= 1e-9);

  const SturmLiouvilleProblem var([](double x) { return 1.0 + x * x; }, [](double x) { return std::cos(3 * x); }, 0.0,
                                  2.0);
  for (double l : {-50.0, 3.0, 120.0}) CHECK_MESSAGE(fundamental_pair(var, l).wronskian_deviation <= 1e-9, l);
}

TEST_CASE("Dirichlet eigenvalues") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto ev = dirichlet_eigenvalues(pr, 3);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(ev[j] - std::pow((j + 1) * pi, 2)) <= 1e-8 * ev[j]);

  const SturmLiouvilleProblem two([](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, 2.0);
  CHECK(std::abs(dirichlet_eigenvalues(two, 1)[0] - pi * pi / 4) <= 1e-8 * pi * pi / 4);

  CHECK_THROWS_AS(dirichlet_eigenvalues(pr, 0), std::invalid_argument);
}

TEST_CASE("Dirichlet eigenvalues with q = 100x against a finite-difference oracle") {
  const SturmLiouvilleProblem pr([](double) { return 1.0; }, [](double x) { return 100.0 * x; }, 0.0, 1.0);
  const auto ev = dirichlet_eigenvalues(pr, 3);
  const int n = 2000;
  const double h = 1.0 / n;
  std::vector<double> d(n - 1);
  for (int i = 1; i < n; ++i) d[i - 1] = 2.0 / (h * h) + 100.0 * i * h;
  const double e = -1.0 / (h * h);
  for (int k = 0; k < 3; ++k) {
    double lo = 0.0, hi = 1e3;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tridiag_count(d, e, mid) > k ? hi : lo) = mid;
    }
    CHECK(std::abs(ev[k] - 0.5 * (lo + hi)) <= 1e-3);
  }
}

TEST_CASE("Poisson solves") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  CHECK(max_dev(poisson_solve(pr, 0.0, {1.0, 0.0}), [](double x) { return 1.0 - x; }) <= 1e-12);
  const double s = 3.0;
  CHECK(max_dev(poisson_solve(pr, -s * s, {0.0, 1.0}), [s](double x) { return std::sinh(s * x) / std::sinh(s); }) <=
        1e-10);
  CHECK(poisson_solve(pr, -2.0, {0.0, 0.0}).sup_norm() == 0.0);
  const auto u = poisson_solve(pr, 5.0, {2.0, -1.0});
  const auto a = poisson_solve(pr, 5.0, {1.0, 0.0});
  const auto b = poisson_solve(pr, 5.0, {0.0, 1.0});
  CHECK(max_dev(u, [&](double x) { return 2.0 * a(x) - b(x); }) <= 1e-10);
  CHECK_THROWS_AS(poisson_solve(pr, pi * pi, {1.0, 0.0}), SingularSolveError);
}

TEST_CASE("Dirichlet-to-Neumann matrices") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto p0 = dtn_matrix(pr, 0.0);
  CHECK(std::abs(p0.P(0, 0) + 1.0) <= 1e-11);
  CHECK(std::abs(p0.P(0, 1) - 1.0) <= 1e-11);
  CHECK(std::abs(p0.P(1, 1) + 1.0) <= 1e-11);
  for (double s : {0.5, 2.0, 10.0, 100.0, 1000.0}) {
    const auto d = dtn_matrix(pr, -s * s);
    const double diag = -s / std::tanh(s);
    const double off = s * 2.0 * std::exp(-s) / (1.0 - std::exp(-2.0 * s));
    CHECK(std::abs(d.P(0, 0) - diag) <= 1e-9 * std::abs(diag));
    CHECK(std::abs(d.P(1, 1) - diag) <= 1e-9 * std::abs(diag));
    CHECK(std::abs(d.P(0, 1) - off) <= 1e-9 * std::abs(diag));
    CHECK(d.asymmetry <= 1e-9);
  }
  const SturmLiouvilleProblem var([](double x) { return 2.0 + std::sin(x); }, [](double x) { return x; }, 0.0, 1.5);
  for (double mu : {-30.0, 0.0, 2.0}) CHECK(dtn_matrix(var, mu).asymmetry <= 1e-9);
  CHECK_THROWS_AS(dtn_matrix(pr, 4 * pi * pi), SingularSolveError);
}

TEST_CASE("Gram matrices of harmonic bases") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto g0 = gram_matrix(pr, 0.0);
  CHECK(std::abs(g0(0, 0) - 1.0 / 3) <= 1e-12);
  CHECK(std::abs(g0(0, 1) - 1.0 / 6) <= 1e-12);
  CHECK(std::abs(g0(1, 1) - 1.0 / 3) <= 1e-12);
  double prev = g0(1, 1);
  for (double s : {1.0, 2.0, 5.0, 20.0, 60.0}) {
    const auto g = gram_matrix(pr, -s * s);
    const double exact = (std::sinh(2 * s) / (2 * s) - 1.0) / (2.0 * std::sinh(s) * std::sinh(s));
    CHECK(std::abs(g(1, 1) - exact) <= 1e-9 * exact);
    CHECK(g(1, 1) < prev);
    CHECK(g(0, 0) == doctest::Approx(g(1, 1)).epsilon(1e-9));
    prev = g(1, 1);
    CHECK_NOTHROW(num::cholesky(g));
  }
}

TEST_CASE("Dirichlet resolvent") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto u = resolvent_dirichlet(pr, 0.0, [](double) { return 1.0; }, {0.0, 0.0});
  CHECK(max_dev(u, [](double x) { return x * (1 - x) / 2; }) <= 1e-12);
  const auto z = resolvent_dirichlet(pr, -2.0, [](double) { return 0.0; }, {0.3, 1.2});
  const auto pz = poisson_solve(pr, -2.0, {0.3, 1.2});
  CHECK(max_dev(z, [&](double x) { return pz(x); }) <= 1e-12);
  const auto s = resolvent_dirichlet(pr, -1.0, [](double x) { return std::sin(pi * x); }, {0.0, 0.0});
  CHECK(max_dev(s, [](double x) { return std::sin(pi * x) / (pi * pi + 1); }) <= 1e-10);
  CHECK(s.values().front() == 0.0);
  CHECK(s.values().back() == 0.0);

  // Integral form of −(p u′)′ + (q − μ)u = f between grid points.
  const SturmLiouvilleProblem var([](double x) { return 1.0 + x; }, [](double x) { return x * x; }, 0.0, 1.0);
  auto f = [](double x) { return std::exp(x) * std::cos(4 * x); };
  const double mu = 3.0;
  const auto w = resolvent_dirichlet(var, mu, f, {0.5, -0.25});
  CHECK(w.values().front() == 0.5);
  CHECK(w.values().back() == -0.25);
  const auto& g = w.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i + 10 < g.size(); i += 10) {
    const double a = g[i], b = g[i + 10];
    const double flux = var.p(b) * w.derivative(b) - var.p(a) * w.derivative(a);
    const double src = num::quadrature([&](double x) { return (var.q(x) - mu) * w(x) - f(x); }, a, b);
    worst = std::max(worst, std::abs(flux - src) / (b - a));
  }
  CHECK(worst <= 1e-7 * std::exp(1.0));
}

TEST_CASE("Green's formula on fundamental solutions") {
  const SturmLiouvilleProblem pr([](double x) { return 1.0 + 0.5 * x; }, [](double x) { return std::sin(2 * x); }, 0.0,
                                 1.0);
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> lam(-60.0, 200.0), c(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double lu = lam(rng), lv = lam(rng);
    const auto fu = fundamental_pair(pr, lu);
    const auto fv = fundamental_pair(pr, lv);
    const double a = c(rng), b = c(rng), e = c(rng), d = c(rng);
    auto u = [&](double x) { return a * fu.y1(x) + b * fu.y2(x); };
    auto v = [&](double x) { return e * fv.y1(x) + d * fv.y2(x); };
    const double uv = num::quadrature([&](double x) { return u(x) * v(x); }, 0.0, 1.0);
    // Au = λu for these combinations.
    const double lhs = (lu - lv) * uv;
    TraceData tu, tv;
    for (int k = 0; k < 2; ++k) {
      tu.gamma[k] = a * fu.trace1.gamma[k] + b * fu.trace2.gamma[k];
      tu.chi[k] = a * fu.trace1.chi[k] + b * fu.trace2.chi[k];
      tv.gamma[k] = e * fv.trace1.gamma[k] + d * fv.trace2.gamma[k];
      tv.chi[k] = e * fv.trace1.chi[k] + d * fv.trace2.chi[k];
    }
    const double rhs = tu.chi[0] * tv.gamma[0] + tu.chi[1] * tv.gamma[1] - tu.gamma[0] * tv.chi[0] -
                       tu.gamma[1] * tv.chi[1];
    const double scale = std::max({1.0, std::abs(lu * uv), std::abs(lv * uv), std::abs(rhs)});
    CHECK(std::abs(lhs - rhs) <= 1e-8 * scale);
  }
}

TEST_CASE("boundary pencil grows as mu decreases") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto p0 = dtn_matrix(pr, 0.0).P;
  const auto m0 = gram_matrix(pr, 0.0);
  double prev = 0.0;
  for (double mu = -0.5; mu >= -1e5; mu *= 3.0) {
    const double m = num::pencil_min(p0 - dtn_matrix(pr, mu).P, m0);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("harmonic bases converge to the mu = 0 basis") {
  const auto pr = SturmLiouvilleProblem::unit_interval();
  const auto z0 = mu_family(pr, 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double mu : {-1.0, -0.1, -0.01, -0.001}) {
    const auto z = mu_family(pr, mu);
    CHECK(z.k1.trace.gamma == z0.k1.trace.gamma);
    CHECK(z.k2.trace.gamma == z0.k2.trace.gamma);
    // Re-solving with the traces of k_i^0 gives k_i^mu again.
    const auto re = poisson_solve(pr, mu, z0.k2.trace.gamma);
    CHECK(re.values().front() == 0.0);
    CHECK(re.values().back() == 1.0);
    double d = 0.0;
    for (double x : z0.k1.k.grid()) d = std::max({d, std::abs(z.k1.k(x) - z0.k1.k(x)), std::abs(z.k2.k(x) - z0.k2.k(x))});
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev <= 1e-3);
}
