#include "kreinlab/interval1d/interval1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/ode.hpp"
#include "kreinlab/numkernel/quadrature.hpp"
#include "kreinlab/numkernel/roots.hpp"

namespace kreinlab::interval {

using num::OdeOptions;
using num::OdeSolution;
using num::SampledFunction;
using num::SymMatrix;

namespace {

constexpr int kCoefficientSamples = 1000;
constexpr int kScanChunks = 4096;

num::OdeSolution shoot(const SturmLiouvilleProblem& pr, double lambda, std::span<const double> init, bool forward,
                       bool store, Accuracy accuracy, std::size_t columns = 1) {
  auto rhs = [&pr, lambda, columns](double x, std::span<const double> y, std::span<double> dy) {
    const double ip = 1.0 / pr.p(x);
    const double c = pr.q(x) - lambda;
    for (std::size_t j = 0; j < columns; ++j) {
      dy[2 * j] = y[2 * j + 1] * ip;
      dy[2 * j + 1] = c * y[2 * j];
    }
  };
  const double a = forward ? pr.x0() : pr.x1();
  const double b = forward ? pr.x1() : pr.x0();
  if (accuracy == Accuracy::coarse) {
    return num::integrate_rk4(rhs, init, a, b, shooting_steps(pr, lambda, tol::ode_scan_target), store, true);
  }
  OdeOptions opt;
  opt.initial_steps = std::max(tol::ode_min_steps, shooting_steps(pr, lambda, tol::ode_step_target) / 2);
  opt.store_all = store;
  opt.renormalize = true;
  return num::solve_ode_ivp(rhs, init, a, b, opt);
}

// Increasing-grid view of column `col` of a stored solution, divided by
// `norm`; derivatives are (p y′) / p.
HarmonicFunction harmonic_from(const SturmLiouvilleProblem& pr, const OdeSolution& s, std::size_t col, double norm) {
  const std::size_t n = s.size();
  std::vector<double> g(n), v(n), d(n), flux(n);
  const bool reversed = s.grid.front() > s.grid.back();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = reversed ? n - 1 - k : k;
    g[k] = s.grid[src];
    v[k] = s.at(src)[2 * col] / norm;
    flux[k] = s.at(src)[2 * col + 1] / norm;
    d[k] = flux[k] / pr.p(g[k]);
  }
  g.front() = pr.x0();
  g.back() = pr.x1();
  HarmonicFunction h{SampledFunction(std::move(g), std::move(v), std::move(d)), std::move(flux), {}};
  h.trace.gamma = {h.k.values().front(), h.k.values().back()};
  h.trace.chi = {h.flux.front(), -h.flux.back()};
  return h;
}

void check_not_dirichlet(const SturmLiouvilleProblem& pr, double y_end, double w_end, double x_end, double mu) {
  const double scale = std::abs(w_end) * pr.length() / pr.p(x_end);
  if (!(std::abs(y_end) > tol::dirichlet_singular * scale))
    throw SingularSolveError("mu = " + std::to_string(mu) + " is a Dirichlet eigenvalue (singular boundary solve)");
}

struct Shots {
  OdeSolution fwd;  // (y, p y′)(x0) = (0, 1)
  OdeSolution bwd;  // (y, p y′)(x1) = (0, −1), integrated towards x0
};

Shots shoot_pair(const SturmLiouvilleProblem& pr, double mu, bool store, Accuracy accuracy = Accuracy::accurate) {
  const std::vector<double> f0{0.0, 1.0};
  const std::vector<double> b0{0.0, -1.0};
  Shots s{shoot(pr, mu, f0, true, store, accuracy), shoot(pr, mu, b0, false, store, accuracy)};
  check_not_dirichlet(pr, s.fwd.back()[0], s.fwd.back()[1], pr.x1(), mu);
  check_not_dirichlet(pr, s.bwd.back()[0], s.bwd.back()[1], pr.x0(), mu);
  return s;
}

DtnMatrix dtn_from(const Shots& s, double mu, bool guard = true) {
  // Forward solution y: k2 = y / y(x1). Backward solution z: k1 = z / z(x0).
  const double y_end = s.fwd.back()[0];
  const double w_end = s.fwd.back()[1];
  const double z_end = s.bwd.back()[0];
  const double wz_end = s.bwd.back()[1];
  const double p12 = std::exp(-s.fwd.log_scale) / y_end;  // (p k2′)(x0)
  const double p22 = -w_end / y_end;
  const double p11 = wz_end / z_end;
  const double p21 = std::exp(-s.bwd.log_scale) / z_end;  // −(p k1′)(x1)
  DtnMatrix d;
  d.mu = mu;
  const double big = std::max({std::abs(p11), std::abs(p22), std::abs(p12), std::abs(p21)});
  d.asymmetry = big > 0.0 ? std::abs(p12 - p21) / big : 0.0;
  if (guard && d.asymmetry > tol::dtn_symmetry_guard)
    throw NumericError("dtn_matrix: asymmetric result at mu = " + std::to_string(mu));
  d.P = SymMatrix{{p11, 0.5 * (p12 + p21)}, {0.5 * (p12 + p21), p22}};
  return d;
}

}  // namespace

SturmLiouvilleProblem::SturmLiouvilleProblem(Unshifted, Coefficient p, Coefficient q, double x0, double x1)
    : p_(std::move(p)), q_(std::move(q)), x0_(x0), x1_(x1) {
  if (!(x1_ > x0_)) throw std::invalid_argument("SturmLiouvilleProblem: need x0 < x1");
  if (!p_ || !q_) throw std::invalid_argument("SturmLiouvilleProblem: missing coefficient");
  sample_coefficients();
}

SturmLiouvilleProblem::SturmLiouvilleProblem(Coefficient p, Coefficient q, double x0, double x1,
                                             std::optional<double> shift)
    : SturmLiouvilleProblem(Unshifted{}, std::move(p), std::move(q), x0, x1) {
  const double l1 = dirichlet_eigenvalues(*this, 1).front();
  shift_ = shift ? *shift : std::max(0.0, 1.0 - l1);
  if (!std::isfinite(shift_)) throw std::invalid_argument("SturmLiouvilleProblem: non-finite shift");
  lambda1_ = l1 + shift_;
  if (!(lambda1_ > 0.0))
    throw std::invalid_argument("SturmLiouvilleProblem: shifted Dirichlet realization is not positive");
}

SturmLiouvilleProblem SturmLiouvilleProblem::unit_interval() {
  return SturmLiouvilleProblem([](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, 1.0);
}

void SturmLiouvilleProblem::sample_coefficients() {
  p_min_ = std::numeric_limits<double>::infinity();
  q_min_ = std::numeric_limits<double>::infinity();
  q_max_ = -q_min_;
  for (int i = 0; i <= kCoefficientSamples; ++i) {
    const double x = x0_ + (x1_ - x0_) * i / kCoefficientSamples;
    const double pv = p_(x);
    const double qv = q_(x);
    if (!std::isfinite(pv) || !std::isfinite(qv)) throw std::invalid_argument("SturmLiouvilleProblem: non-finite coefficient");
    p_min_ = std::min(p_min_, pv);
    q_min_ = std::min(q_min_, qv);
    q_max_ = std::max(q_max_, qv);
  }
  if (!(p_min_ > 0.0)) throw std::invalid_argument("SturmLiouvilleProblem: p must be positive");
  eff_len_ = num::quadrature([this](double x) { return 1.0 / std::sqrt(p_(x)); }, x0_, x1_);
}

double SturmLiouvilleProblem::q_max_abs() const {
  return std::max(std::abs(q_min_ + shift_), std::abs(q_max_ + shift_));
}

int shooting_steps(const SturmLiouvilleProblem& problem, double lambda, double target) {
  const double omega = std::sqrt((std::abs(lambda) + problem.q_max_abs()) / problem.p_min()) + 1.0;
  return num::rk4_steps(omega, problem.length(), target);
}

EndpointMatrix endpoint_matrix(const SturmLiouvilleProblem& problem, double lambda, Accuracy accuracy) {
  const std::vector<double> init{1.0, 0.0, 0.0, 1.0};
  const OdeSolution s = shoot(problem, lambda, init, true, false, accuracy, 2);
  const auto e = s.back();
  return {e[0], e[2], e[1], e[3], s.log_scale};
}

FundamentalPair fundamental_pair(const SturmLiouvilleProblem& problem, double lambda) {
  const std::vector<double> init{1.0, 0.0, 0.0, 1.0};
  OdeOptions opt;
  opt.initial_steps = std::max(tol::ode_min_steps, shooting_steps(problem, lambda, tol::ode_step_target) / 2);
  auto rhs = [&problem, lambda](double x, std::span<const double> y, std::span<double> dy) {
    const double ip = 1.0 / problem.p(x);
    const double c = problem.q(x) - lambda;
    dy[0] = y[1] * ip;
    dy[1] = c * y[0];
    dy[2] = y[3] * ip;
    dy[3] = c * y[2];
  };
  const OdeSolution s = num::solve_ode_ivp(rhs, init, problem.x0(), problem.x1(), opt);
  const HarmonicFunction h1 = harmonic_from(problem, s, 0, 1.0);
  const HarmonicFunction h2 = harmonic_from(problem, s, 1, 1.0);
  FundamentalPair fp{h1.k, h2.k, h1.flux, h2.flux, h1.trace, h2.trace, 0.0};
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto y = s.at(k);
    const double w = y[0] * y[3] - y[1] * y[2];
    const double terms = std::abs(y[0] * y[3]) + std::abs(y[1] * y[2]);
    fp.wronskian_deviation = std::max(fp.wronskian_deviation, std::abs(w - 1.0) / std::max(1.0, terms));
  }
  return fp;
}

std::vector<double> spectral_grid(double lo, double hi, double effective_length, int density) {
  if (!(lo < hi)) throw std::invalid_argument("spectral_grid: need lo < hi");
  auto sigma = [](double l) { return std::copysign(std::sqrt(std::abs(l)), l); };
  const double s0 = sigma(lo);
  const double s1 = sigma(hi);
  const double step = std::numbers::pi / (std::max(1, density) * effective_length);
  const auto n = static_cast<std::size_t>(std::ceil((s1 - s0) / step)) + 1;
  std::vector<double> g;
  g.reserve(n + 1);
  g.push_back(lo);
  for (std::size_t i = 1; i < n; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n);
    const double l = s * std::abs(s);
    if (l > g.back() && l < hi) g.push_back(l);
  }
  g.push_back(hi);
  return g;
}

std::vector<double> dirichlet_eigenvalues(const SturmLiouvilleProblem& problem, int count) {
  if (count < 1) throw std::invalid_argument("dirichlet_eigenvalues: count must be >= 1");
  const double len = problem.length();
  auto normalized = [&](Accuracy acc) {
    return [&problem, len, acc](double lambda) {
      // Only the solution with (y, p y′)(x0) = (0, 1) is needed.
      const std::vector<double> init{0.0, 1.0};
      const auto e = shoot(problem, lambda, init, true, false, acc).back();
      const double w = e[1] * len / problem.p(problem.x1());
      return e[0] / std::hypot(e[0], w);
    };
  };
  num::RootScanOptions opt;
  opt.coarse = normalized(Accuracy::coarse);
  const num::ScalarFn f = normalized(Accuracy::accurate);

  const double floor = problem.q_min() + problem.p_min() * std::pow(std::numbers::pi / len, 2);
  double lo = floor - 1.0 - 1e-3 * std::abs(floor);
  const double gap = std::numbers::pi / problem.effective_length();
  std::vector<double> roots;
  for (int chunk = 0; chunk < kScanChunks && static_cast<int>(roots.size()) < count; ++chunk) {
    const double s_lo = std::copysign(std::sqrt(std::abs(lo)), lo);
    const double s_hi = s_lo + (count - static_cast<int>(roots.size()) + 2) * gap;
    const double hi = s_hi * std::abs(s_hi);
    const auto grid = spectral_grid(lo, hi, problem.effective_length());
    for (double r : num::find_roots_on_grid(f, grid, opt))
      if (roots.empty() || r > roots.back() * (1.0 + 1e-12) + 1e-300) roots.push_back(r);
    lo = hi;
  }
  if (static_cast<int>(roots.size()) < count) throw ConvergenceError("dirichlet_eigenvalues: scan budget exceeded");
  roots.resize(count);
  return roots;
}

MuFamily mu_family(const SturmLiouvilleProblem& problem, double mu) {
  const Shots s = shoot_pair(problem, mu, true);
  MuFamily fam;
  fam.mu = mu;
  fam.k2 = harmonic_from(problem, s.fwd, 0, s.fwd.back()[0]);
  fam.k1 = harmonic_from(problem, s.bwd, 0, s.bwd.back()[0]);
  fam.k2.trace.gamma = {0.0, 1.0};
  fam.k1.trace.gamma = {1.0, 0.0};
  fam.dtn = dtn_from(s, mu);
  // Exact traces from the shooting data (the sampled end values may have
  // underflowed for very negative μ).
  fam.k1.trace.chi = {fam.dtn.P(0, 0), fam.dtn.P(1, 0)};
  fam.k2.trace.chi = {fam.dtn.P(0, 1), fam.dtn.P(1, 1)};
  const double g11 = num::inner_product(fam.k1.k, fam.k1.k);
  const double g12 = num::inner_product(fam.k1.k, fam.k2.k);
  const double g22 = num::inner_product(fam.k2.k, fam.k2.k);
  fam.gram = SymMatrix{{g11, g12}, {g12, g22}};
  return fam;
}

DtnMatrix dtn_matrix(const SturmLiouvilleProblem& problem, double mu, Accuracy accuracy) {
  return dtn_from(shoot_pair(problem, mu, false, accuracy), mu, accuracy == Accuracy::accurate);
}

num::SymMatrix gram_matrix(const SturmLiouvilleProblem& problem, double mu) { return mu_family(problem, mu).gram; }

SampledFunction poisson_solve(const SturmLiouvilleProblem& problem, double mu, std::array<double, 2> phi) {
  const MuFamily fam = mu_family(problem, mu);
  // Put k1 on the grid of k2 so the result is a single sampled function.
  const auto& g = fam.k2.k.grid();
  std::vector<double> v(g.size()), d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[i] = phi[0] * fam.k1.k(g[i]) + phi[1] * fam.k2.k.values()[i];
    d[i] = phi[0] * fam.k1.k.derivative(g[i]) + phi[1] * fam.k2.k.derivs()[i];
  }
  v.front() = phi[0];
  v.back() = phi[1];
  return SampledFunction(g, std::move(v), std::move(d));
}

SampledFunction resolvent_dirichlet(const SturmLiouvilleProblem& problem, double mu,
                                    const std::function<double(double)>& f, std::array<double, 2> phi) {
  auto rhs = [&problem, mu, &f](double x, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1] / problem.p(x);
    dy[1] = (problem.q(x) - mu) * y[0] - f(x);
  };
  const std::vector<double> init{0.0, 0.0};
  OdeOptions opt;
  opt.initial_steps = std::max(tol::ode_min_steps, shooting_steps(problem, mu, tol::ode_step_target) / 2);
  const OdeSolution s = num::solve_ode_ivp(rhs, init, problem.x0(), problem.x1(), opt);
  const MuFamily fam = mu_family(problem, mu);
  const double c1 = phi[0];
  const double c2 = phi[1] - s.back()[0];
  std::vector<double> g(s.grid), v(s.size()), d(s.size());
  g.back() = problem.x1();
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[i] = s.at(i)[0] + c1 * fam.k1.k(g[i]) + c2 * fam.k2.k(g[i]);
    d[i] = s.at(i)[1] / problem.p(g[i]) + c1 * fam.k1.k.derivative(g[i]) + c2 * fam.k2.k.derivative(g[i]);
  }
  v.front() = phi[0];
  v.back() = phi[1];
  return SampledFunction(std::move(g), std::move(v), std::move(d));
}

SampledFunction resolvent_dirichlet(const SturmLiouvilleProblem& problem, double mu, const SampledFunction& f,
                                    std::array<double, 2> phi) {
  return resolvent_dirichlet(problem, mu, [&f](double x) { return f(x); }, phi);
}

TraceData traces(const SturmLiouvilleProblem& problem, const SampledFunction& u) {
  TraceData t;
  t.gamma = {u.values().front(), u.values().back()};
  const double d0 = u.has_derivs() ? u.derivs().front() : u.derivative(u.lo());
  const double d1 = u.has_derivs() ? u.derivs().back() : u.derivative(u.hi());
  t.chi = {problem.p(problem.x0()) * d0, -problem.p(problem.x1()) * d1};
  return t;
}

}  // namespace kreinlab::interval
