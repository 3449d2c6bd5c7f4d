#include "kreinlab/extensions1d/extensions1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kreinlab/numkernel/eigen.hpp"
#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/ode.hpp"
#include "kreinlab/numkernel/roots.hpp"

namespace kreinlab::ext {

using interval::Accuracy;
using num::Matrix;
using num::OdeSolution;

namespace {

constexpr double kProjectionTol = 1e-12;
constexpr int kScanChunks = 4096;

// Runs `columns` copies of a linear system of size `block` from x0 to x1,
// column j starting from init[j]. The rhs receives one block at a time.
template <class Block>
OdeSolution shoot_columns(const SturmLiouvilleProblem& pr, double lambda, std::size_t block,
                          const std::vector<std::vector<double>>& init, Block&& f, Accuracy acc, bool store) {
  const std::size_t cols = init.size();
  std::vector<double> y0;
  for (const auto& c : init) y0.insert(y0.end(), c.begin(), c.end());
  auto rhs = [&](double x, std::span<const double> y, std::span<double> dy) {
    const double ip = 1.0 / pr.p(x);
    const double q = pr.q(x);
    for (std::size_t j = 0; j < cols; ++j) f(x, ip, q, y.subspan(j * block, block), dy.subspan(j * block, block));
  };
  if (acc == Accuracy::coarse) {
    return num::integrate_rk4(rhs, y0, pr.x0(), pr.x1(), interval::shooting_steps(pr, lambda, tol::ode_scan_target),
                              store, true);
  }
  num::OdeOptions opt;
  opt.initial_steps = std::max(tol::ode_min_steps, interval::shooting_steps(pr, lambda, tol::ode_step_target) / 2);
  opt.store_all = store;
  opt.renormalize = true;
  return num::solve_ode_ivp(rhs, y0, pr.x0(), pr.x1(), opt);
}

std::vector<double> scan_roots(const std::function<double(double, Accuracy)>& f, double lo, double hi,
                               double eff_len, bool tangential) {
  num::RootScanOptions opt;
  opt.coarse = [&f](double l) { return f(l, Accuracy::coarse); };
  opt.detect_tangential = tangential;
  const auto grid = interval::spectral_grid(lo, hi, eff_len);
  return num::find_roots_on_grid([&f](double l) { return f(l, Accuracy::accurate); }, grid, opt);
}

// Ascending roots from successive chunks starting at lo until `count` found.
std::vector<double> first_roots(const std::function<double(double, Accuracy)>& f, double lo, double eff_len,
                                int count, const char* who) {
  const double gap = std::numbers::pi / eff_len;
  std::vector<double> roots;
  for (int chunk = 0; chunk < kScanChunks && static_cast<int>(roots.size()) < count; ++chunk) {
    const double s_lo = std::copysign(std::sqrt(std::abs(lo)), lo);
    const double s_hi = s_lo + (count - static_cast<int>(roots.size()) + 2) * gap;
    const double hi = s_hi * std::abs(s_hi);
    for (double r : scan_roots(f, lo, hi, eff_len, false))
      if (roots.empty() || r > roots.back() * (1.0 + 1e-12)) roots.push_back(r);
    lo = hi;
  }
  if (static_cast<int>(roots.size()) < count) throw ConvergenceError(std::string(who) + ": scan budget exceeded");
  roots.resize(count);
  return roots;
}

double max_abs_entry(const SymMatrix& a) { return num::max_abs(a.full()); }

SymMatrix restrict_to(const SymMatrix& a, const Matrix& u) { return num::congruence(a, u); }

double pencil_or_inf(const SymMatrix& a, const SymMatrix& m) { return num::pencil_min(a, m); }

}  // namespace

BoundaryConditionSpec::BoundaryConditionSpec(SymMatrix pi, SymMatrix L) : pi_(std::move(pi)), L_(std::move(L)) {
  if (pi_.dim() != 2 || L_.dim() != 2) throw std::invalid_argument("BoundaryConditionSpec: matrices must be 2x2");
  const Matrix p = pi_.full();
  if (num::max_abs(p * p - p) > kProjectionTol) throw std::invalid_argument("BoundaryConditionSpec: pi is not a projection");
  if (num::max_abs((p * L_.full()) * p - L_.full()) > kProjectionTol * std::max(1.0, max_abs_entry(L_)))
    throw std::invalid_argument("BoundaryConditionSpec: L must act on range(pi)");
  for (double v : L_.full().data())
    if (!std::isfinite(v)) throw std::invalid_argument("BoundaryConditionSpec: non-finite L");
  const auto e = num::sym_eigen(pi_);
  U_ = Matrix(2, 0);
  V_ = Matrix(2, 0);
  std::vector<std::size_t> in, out;
  for (std::size_t k = 0; k < 2; ++k) (e.eigenvalues[k] > 0.5 ? in : out).push_back(k);
  rank_ = static_cast<int>(in.size());
  U_ = Matrix(2, in.size());
  V_ = Matrix(2, out.size());
  for (std::size_t c = 0; c < in.size(); ++c)
    for (std::size_t i = 0; i < 2; ++i) U_(i, c) = e.eigenvectors(i, in[c]);
  for (std::size_t c = 0; c < out.size(); ++c)
    for (std::size_t i = 0; i < 2; ++i) V_(i, c) = e.eigenvectors(i, out[c]);
}

BoundaryConditionSpec BoundaryConditionSpec::dirichlet() { return {SymMatrix(2), SymMatrix(2)}; }

BoundaryConditionSpec BoundaryConditionSpec::full(SymMatrix L) { return {SymMatrix::identity(2), std::move(L)}; }

BoundaryConditionSpec BoundaryConditionSpec::rank_one(std::array<double, 2> d, double ell) {
  const double n = std::hypot(d[0], d[1]);
  if (!(n > 0.0)) throw std::invalid_argument("BoundaryConditionSpec::rank_one: zero direction");
  d[0] /= n;
  d[1] /= n;
  SymMatrix pi{{d[0] * d[0], d[0] * d[1]}, {d[0] * d[1], d[1] * d[1]}};
  SymMatrix L = ell * pi;
  return {std::move(pi), std::move(L)};
}

BoundaryConditionSpec krein_bcspec(const SturmLiouvilleProblem& problem, double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("krein_bcspec: a must be finite");
  return BoundaryConditionSpec::full(a * interval::gram_matrix(problem, 0.0));
}

Realization::Realization(const SturmLiouvilleProblem& problem, BoundaryConditionSpec spec)
    : problem_(problem), spec_(std::move(spec)), p0_(interval::dtn_matrix(problem, 0.0).P) {}

double Realization::determinant(double lambda, Accuracy accuracy) const {
  const auto e = interval::endpoint_matrix(problem_, lambda, accuracy);
  const double t = std::exp(-e.log_scale);
  // γu = G c and χu = X c for u = c1 y1 + c2 y2, common factor exp(log_scale).
  const Matrix G{{t, 0.0}, {e.y1, e.y2}};
  const Matrix X{{0.0, t}, {-e.w1, -e.w2}};
  const Matrix C = (p0_ + spec_.L()).full();
  const Matrix R = X - C * G;
  Matrix B(2, 2);
  std::size_t row = 0;
  const Matrix& V = spec_.null_basis();
  const Matrix& U = spec_.range_basis();
  for (std::size_t k = 0; k < V.cols(); ++k, ++row)
    for (std::size_t j = 0; j < 2; ++j) B(row, j) = V(0, k) * G(0, j) + V(1, k) * G(1, j);
  for (std::size_t k = 0; k < U.cols(); ++k, ++row)
    for (std::size_t j = 0; j < 2; ++j) B(row, j) = U(0, k) * R(0, j) + U(1, k) * R(1, j);
  const double lp = problem_.length() / problem_.p(problem_.x1());
  const double n1 = std::sqrt(t * t + e.y1 * e.y1 + e.w1 * e.w1 * lp * lp);
  const double n2 = std::sqrt(t * t / (lp * lp) + e.y2 * e.y2 / (lp * lp) + e.w2 * e.w2);
  const double scale = std::max(1.0, num::max_abs(C) * problem_.length());
  return (B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0)) / (n1 * n2 * scale);
}

double char_determinant(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec, double lambda) {
  return Realization(problem, spec).determinant(lambda);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::shooting:
      return "shooting";
    case Method::buckling:
      return "buckling";
    case Method::reduction:
      return "reduction";
  }
  return "unknown";
}

RealizationSpectrum realization_eigenvalues(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec,
                                            double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("realization_eigenvalues: need lo < hi");
  const Realization r(problem, spec);
  const double eff = problem.effective_length();
  // Well below m(A_γ) the fundamental pair is dominated by its growing mode
  // and the shooting determinant cancels; there the boundary form
  // det Uᵀ(P^λ − P⁰ − L)U has the same roots and no poles.
  const double split = spec.rank() > 0 ? std::clamp(0.5 * problem.lambda1(), lo, hi) : lo;
  const Matrix& U = spec.range_basis();
  auto boundary_form = [&](double l, Accuracy a) {
    const SymMatrix m = num::congruence(interval::dtn_matrix(problem, l, a).P - r.p0() - spec.L(), U);
    const double scale = std::pow(1.0 + std::sqrt(std::abs(l)) + max_abs_entry(spec.L()), spec.rank());
    return num::determinant(m.full()) / scale;
  };
  auto shooting = [&r](double l, Accuracy a) { return r.determinant(l, a); };

  double biggest = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double l = lo + (hi - lo) * i / 16.0;
    biggest = std::max(biggest, std::abs(l < split ? boundary_form(l, Accuracy::coarse) : shooting(l, Accuracy::coarse)));
  }
  if (biggest < 1e-12) throw NumericError("realization_eigenvalues: determinant vanishes identically (degenerate spec)");

  RealizationSpectrum out;
  out.method = Method::shooting;
  if (split > lo) out.eigenvalues = scan_roots(boundary_form, lo, split, eff, true);
  if (split < hi)
    for (double e : scan_roots(shooting, split, hi, eff, true))
      if (out.eigenvalues.empty() || e > out.eigenvalues.back() + tol::root_rel * std::max(1.0, std::abs(e)))
        out.eigenvalues.push_back(e);
  return out;
}

TmuForm tmu_form(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec, double mu) {
  if (!(mu < problem.lambda1())) throw std::invalid_argument("tmu_form: mu must lie below m(A_gamma)");
  TmuForm t;
  t.mu = mu;
  const auto fam0 = interval::mu_family(problem, 0.0);
  const auto fam = mu == 0.0 ? fam0 : interval::mu_family(problem, mu);
  const Matrix& U = spec.range_basis();
  const SymMatrix Q = fam0.dtn.P - fam.dtn.P;
  t.L_mu = restrict_to(spec.L() + Q, U);
  t.gram_mu = restrict_to(fam.gram, U);
  t.gram_z0 = restrict_to(fam0.gram, U);
  t.m_tmu = pencil_or_inf(t.L_mu, t.gram_mu);
  t.m_tmu_z0 = pencil_or_inf(t.L_mu, t.gram_z0);
  return t;
}

double birman_bound(double mT, double mAgamma) {
  if (!(mAgamma > 0.0)) throw std::invalid_argument("birman_bound: m(A_gamma) must be positive");
  if (!(mT > -mAgamma)) throw std::invalid_argument("birman_bound: requires m(T) > -m(A_gamma)");
  if (std::isinf(mT)) return mAgamma;
  return mT * mAgamma / (mT + mAgamma);
}

std::vector<double> default_certificate_grid(const SturmLiouvilleProblem& problem) {
  std::vector<double> g;
  for (int k = 24; k >= -8; --k) g.push_back(-std::pow(10.0, k / 4.0));
  g.push_back(0.0);
  for (double f : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) g.push_back(f * problem.lambda1());
  return g;
}

Certificate lower_bound_certificate(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec,
                                    std::vector<double> grid) {
  const double top = problem.lambda1();
  std::erase_if(grid, [top](double m) { return !(m < top) || !std::isfinite(m); });
  std::sort(grid.begin(), grid.end(), std::greater<>());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Certificate cert;
  if (spec.rank() == 0) {
    // T acts on {0}: every μ below m(A_γ) certifies.
    cert.grid_point = grid.empty() ? std::nullopt : std::optional<double>(grid.front());
  }
  const SymMatrix p0 = interval::dtn_matrix(problem, 0.0).P;
  const SymMatrix m0 = restrict_to(interval::gram_matrix(problem, 0.0), spec.range_basis());
  auto feasible = [&](double mu) {
    ++cert.evaluations;
    if (spec.rank() == 0) return true;
    try {
      const SymMatrix pm = mu == 0.0 ? p0 : interval::dtn_matrix(problem, mu).P;
      return num::pencil_min(restrict_to(spec.L() + (p0 - pm), spec.range_basis()), m0) >= 0.0;
    } catch (const SingularSolveError&) {
      return false;
    }
  };
  std::optional<double> upper;
  for (double mu : grid) {
    if (feasible(mu)) {
      cert.grid_point = mu;
      break;
    }
    upper = mu;
  }
  if (!cert.grid_point) return cert;
  double lo = *cert.grid_point;
  double hi = upper.value_or(top);
  while (hi - lo > tol::certificate_bisect_rel * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  double star = lo - tol::certificate_backoff_rel * std::max(1.0, std::abs(lo));
  if (star < *cert.grid_point || !feasible(star)) star = *cert.grid_point;
  cert.mu_star = star;
  return cert;
}

GmuScan gmu_scan(const SturmLiouvilleProblem& problem, const std::vector<double>& mus,
                 std::optional<std::pair<double, double>> fit_window) {
  for (double mu : mus)
    if (!(mu < problem.lambda1())) throw std::invalid_argument("gmu_scan: every mu must lie below m(A_gamma)");
  const SymMatrix p0 = interval::dtn_matrix(problem, 0.0).P;
  const SymMatrix m0 = interval::gram_matrix(problem, 0.0);
  GmuScan out;
  for (double mu : mus) {
    const SymMatrix q = mu == 0.0 ? SymMatrix(2) : p0 - interval::dtn_matrix(problem, mu).P;
    out.rows.push_back({mu, num::pencil_min(q, m0)});
  }
  std::vector<double> t, y;
  double top = 0.0;
  for (const auto& r : out.rows)
    if (r.mu != 0.0 && r.m_gmu > 0.0) top = std::max(top, std::abs(r.mu));
  double lo = top / 10.0 * (1.0 - 1e-12);
  double hi = top * (1.0 + 1e-12);
  if (fit_window) {
    lo = fit_window->first;
    hi = fit_window->second;
  }
  auto collect = [&](double a, double b) {
    t.clear();
    y.clear();
    for (const auto& r : out.rows)
      if (r.mu != 0.0 && r.m_gmu > 0.0 && std::abs(r.mu) >= a && std::abs(r.mu) <= b) {
        t.push_back(std::abs(r.mu));
        y.push_back(r.m_gmu);
      }
  };
  collect(lo, hi);
  if (t.size() < 3 && !fit_window) collect(0.0, std::numeric_limits<double>::infinity());
  if (t.size() >= 3) out.fit = num::loglog_fit(t, y);
  return out;
}

DtnDifference dtn_difference_check(const SturmLiouvilleProblem& problem, double mu) {
  if (!(mu < problem.lambda1())) throw std::invalid_argument("dtn_difference_check: mu must lie below m(A_gamma)");
  const auto fam0 = interval::mu_family(problem, 0.0);
  const auto fam = mu == 0.0 ? fam0 : interval::mu_family(problem, mu);
  const SymMatrix q = fam0.dtn.P - fam.dtn.P;
  const num::SampledFunction* km[2] = {&fam.k1.k, &fam.k2.k};
  const num::SampledFunction* k0[2] = {&fam0.k1.k, &fam0.k2.k};
  DtnDifference d;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double alt = -mu * num::inner_product(*km[i], *k0[j]);
      d.residual = std::max(d.residual, std::abs(q(i, j) - alt));
      d.q_norm = std::max(d.q_norm, std::abs(q(i, j)));
    }
  return d;
}

ResolventCheck krein_resolvent_check(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec,
                                     const std::function<double(double)>& f) {
  // Direct solve: (v, p v′) with zero data plus the fundamental pair, one grid.
  auto block = [&f](double x, double ip, double q, std::span<const double> y, std::span<double> dy, bool forced) {
    dy[0] = y[1] * ip;
    dy[1] = q * y[0] - (forced ? f(x) : 0.0);
  };
  auto rhs = [&](double x, std::span<const double> y, std::span<double> dy) {
    const double ip = 1.0 / problem.p(x);
    const double q = problem.q(x);
    block(x, ip, q, y.subspan(0, 2), dy.subspan(0, 2), true);
    block(x, ip, q, y.subspan(2, 2), dy.subspan(2, 2), false);
    block(x, ip, q, y.subspan(4, 2), dy.subspan(4, 2), false);
  };
  const std::vector<double> init{0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  num::OdeOptions opt;
  opt.initial_steps = std::max(tol::ode_min_steps, interval::shooting_steps(problem, 0.0, tol::ode_step_target) / 2);
  const OdeSolution s = num::solve_ode_ivp(rhs, init, problem.x0(), problem.x1(), opt);
  const auto e = s.back();
  const Matrix G{{1.0, 0.0}, {e[2], e[4]}};
  const Matrix X{{0.0, 1.0}, {-e[3], -e[5]}};
  const std::vector<double> gv{0.0, e[0]};
  const std::vector<double> xv{0.0, -e[1]};
  const SymMatrix p0 = interval::dtn_matrix(problem, 0.0).P;
  const Matrix C = (p0 + spec.L()).full();
  const Matrix R = X - C * G;
  const auto cgv = C * std::span<const double>(gv);
  Matrix B(2, 2);
  std::vector<double> rhs_b(2);
  std::size_t row = 0;
  const Matrix& V = spec.null_basis();
  const Matrix& U = spec.range_basis();
  for (std::size_t k = 0; k < V.cols(); ++k, ++row) {
    for (std::size_t j = 0; j < 2; ++j) B(row, j) = V(0, k) * G(0, j) + V(1, k) * G(1, j);
    rhs_b[row] = -(V(0, k) * gv[0] + V(1, k) * gv[1]);
  }
  for (std::size_t k = 0; k < U.cols(); ++k, ++row) {
    for (std::size_t j = 0; j < 2; ++j) B(row, j) = U(0, k) * R(0, j) + U(1, k) * R(1, j);
    rhs_b[row] = -(U(0, k) * (xv[0] - cgv[0]) + U(1, k) * (xv[1] - cgv[1]));
  }
  const double bn = num::max_abs(B);
  if (std::abs(num::determinant(B)) <= 1e-12 * bn * bn)
    throw SingularSolveError("krein_resolvent_check: 0 is an eigenvalue of the realization");
  const auto c = num::solve(B, rhs_b);

  std::vector<double> g(s.grid), v(s.size()), d(s.size());
  g.back() = problem.x1();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto y = s.at(i);
    v[i] = y[0] + c[0] * y[2] + c[1] * y[4];
    d[i] = (y[1] + c[0] * y[3] + c[1] * y[5]) / problem.p(g[i]);
  }
  num::SampledFunction u1(g, std::move(v), std::move(d));

  // Krein formula in the trace basis.
  const auto dir = interval::resolvent_dirichlet(problem, 0.0, f, {0.0, 0.0});
  std::array<double, 2> phi{0.0, 0.0};
  if (spec.rank() > 0) {
    const auto fam0 = interval::mu_family(problem, 0.0);
    const std::vector<double> F{num::inner_product(fam0.k1.k, f), num::inner_product(fam0.k2.k, f)};
    const SymMatrix lu = num::congruence(spec.L(), U);
    const double ln = std::max(max_abs_entry(spec.L()), 1e-300);
    if (std::abs(num::determinant(lu.full())) <= std::pow(1e-12 * ln, static_cast<double>(spec.rank())))
      throw SingularSolveError("krein_resolvent_check: T is not invertible on X");
    std::vector<double> uf(U.cols());
    for (std::size_t k = 0; k < U.cols(); ++k) uf[k] = U(0, k) * F[0] + U(1, k) * F[1];
    const auto coef = num::solve(lu.full(), uf);
    for (std::size_t k = 0; k < U.cols(); ++k) {
      phi[0] += U(0, k) * coef[k];
      phi[1] += U(1, k) * coef[k];
    }
    std::vector<double> w(g.size()), dw(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      w[i] = dir(g[i]) + phi[0] * fam0.k1.k(g[i]) + phi[1] * fam0.k2.k(g[i]);
      dw[i] = dir.derivative(g[i]) + phi[0] * fam0.k1.k.derivative(g[i]) + phi[1] * fam0.k2.k.derivative(g[i]);
    }
    num::SampledFunction u2(g, std::move(w), std::move(dw));
    double diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(u1.values()[i] - u2.values()[i]));
    return {diff / u1.sup_norm(), std::move(u1), std::move(u2)};
  }
  std::vector<double> w(g.size()), dw(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    w[i] = dir(g[i]);
    dw[i] = dir.derivative(g[i]);
  }
  num::SampledFunction u2(g, std::move(w), std::move(dw));
  double diff = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(u1.values()[i] - u2.values()[i]));
  return {diff / u1.sup_norm(), std::move(u1), std::move(u2)};
}

namespace {

// (v, p v′, w, p w′) with w = Av and Aw = λw.
double buckling_det(const SturmLiouvilleProblem& pr, double lambda, Accuracy acc) {
  auto blk = [lambda](double, double ip, double q, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1] * ip;
    dy[1] = q * y[0] - y[2];
    dy[2] = y[3] * ip;
    dy[3] = (q - lambda) * y[2];
  };
  const OdeSolution s = shoot_columns(pr, lambda, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}}, blk, acc, false);
  const auto e = s.back();
  const double t = std::exp(-s.log_scale);
  const double lp = pr.length() / pr.p(pr.x1());
  const double big = std::abs(lambda) + pr.lambda1();
  auto norm = [&](std::size_t j, double ti) {
    const double* c = e.data() + 4 * j;
    return std::sqrt(c[0] * c[0] + c[1] * c[1] * lp * lp + (c[2] * c[2] + c[3] * c[3] * lp * lp + ti * ti) / (big * big));
  };
  const double det = e[0] * e[5] * lp - e[4] * e[1] * lp;
  return det / (norm(0, t) * norm(1, t * lp));
}

// (v, p v′, w, p w′, y, p y′) with w = Av, y = Aw and Ay = λy.
double reduction_det(const SturmLiouvilleProblem& pr, double a, double lambda, Accuracy acc) {
  auto blk = [lambda](double, double ip, double q, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1] * ip;
    dy[1] = q * y[0] - y[2];
    dy[2] = y[3] * ip;
    dy[3] = q * y[2] - y[4];
    dy[4] = y[5] * ip;
    dy[5] = (q - lambda) * y[4];
  };
  const std::vector<std::vector<double>> init{
      {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1}};
  const OdeSolution s = shoot_columns(pr, lambda, 6, init, blk, acc, false);
  const auto e = s.back();
  const double t = std::exp(-s.log_scale);
  const double lp = pr.length() / pr.p(pr.x1());
  const double big = std::abs(lambda) + std::abs(a) + pr.lambda1();
  const double b2 = big * big;
  Matrix B(4, 4);
  double norms = 1.0;
  for (std::size_t j = 0; j < 4; ++j) {
    const double* c = e.data() + 6 * j;
    const double cw = t * init[j][2];
    const double cy = t * init[j][4];
    B(0, j) = c[0];
    B(1, j) = c[1] * lp;
    B(2, j) = ((lambda - a) * c[4] - lambda * lambda * c[2]) / (b2 * big);
    B(3, j) = ((lambda - a) * cy - lambda * lambda * cw) / (b2 * big);
    double n2 = c[0] * c[0] + c[1] * c[1] * lp * lp;
    n2 += (c[2] * c[2] + c[3] * c[3] * lp * lp) / b2 + (c[4] * c[4] + c[5] * c[5] * lp * lp) / (b2 * b2);
    double ti = 0.0;
    for (std::size_t k = 2; k < 6; ++k) ti += init[j][k] * init[j][k];
    n2 += t * t * ti / (b2 * b2);
    norms *= std::sqrt(n2);
  }
  return num::determinant(B) / norms;
}

}  // namespace

std::vector<double> buckling_eigenvalues(const SturmLiouvilleProblem& problem, int count) {
  if (count < 1) throw std::invalid_argument("buckling_eigenvalues: count must be >= 1");
  auto f = [&problem](double l, Accuracy a) { return buckling_det(problem, l, a); };
  // (A v, A v) ≥ m(A_γ)(A v, v) on the clamped space: no roots below m(A_γ).
  return first_roots(f, 0.5 * problem.lambda1(), problem.effective_length(), count, "buckling_eigenvalues");
}

std::vector<double> buckling_eigenvalues(const SturmLiouvilleProblem& problem, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("buckling_eigenvalues: need lo < hi");
  lo = std::max(lo, 0.5 * problem.lambda1());
  if (!(lo < hi)) return {};
  auto f = [&problem](double l, Accuracy a) { return buckling_det(problem, l, a); };
  return scan_roots(f, lo, hi, problem.effective_length(), false);
}

ReductionSpectrum reduction_eigenvalues(const SturmLiouvilleProblem& problem, double a, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("reduction_eigenvalues: need lo < hi");
  auto f = [&problem, a](double l, Accuracy acc) { return reduction_det(problem, a, l, acc); };
  ReductionSpectrum out;
  const double gap = tol::krein_gap * std::max(1.0, std::abs(a));
  std::vector<std::pair<double, double>> windows;
  if (a - gap > lo && a + gap < hi) {
    windows = {{lo, a - gap}, {a + gap, hi}};
  } else if (a + gap <= lo || a - gap >= hi) {
    windows = {{lo, hi}};
  } else if (a - gap <= lo) {
    if (a + gap < hi) windows = {{a + gap, hi}};
  } else {
    windows = {{lo, a - gap}};
  }
  for (const auto& [wl, wh] : windows)
    for (double r : scan_roots(f, wl, wh, problem.effective_length(), false)) out.eigenvalues.push_back(r);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  if (a >= lo && a <= hi) {
    const double fa = std::abs(f(a, Accuracy::accurate));
    const double ref = std::max(std::abs(f(a - 10 * gap, Accuracy::accurate)), std::abs(f(a + 10 * gap, Accuracy::accurate)));
    out.a_is_root = fa <= 1e-9 || fa <= tol::tangential_ratio * ref;
  }
  return out;
}

ProjectionCheck projection_check(const SturmLiouvilleProblem& problem, const std::function<double(double)>& f,
                                 const std::function<double(double)>& df, const std::function<double(double)>& d2f) {
  const double h = 1e-3 * problem.length();
  auto dp = [&problem, h](double x) {
    return (-problem.p(x + 2 * h) + 8 * problem.p(x + h) - 8 * problem.p(x - h) + problem.p(x - 2 * h)) / (12 * h);
  };
  auto g = [&](double x) { return -dp(x) * df(x) - problem.p(x) * d2f(x) + problem.q(x) * f(x); };
  // (w, p w′, s, p s′) with s = Aw and As = g: one forced column and the two
  // homogeneous columns with (s, p s′)(x0) free.
  auto rhs = [&](double x, std::span<const double> y, std::span<double> dy) {
    const double ip = 1.0 / problem.p(x);
    const double q = problem.q(x);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto c = y.subspan(4 * j, 4);
      const auto d = dy.subspan(4 * j, 4);
      d[0] = c[1] * ip;
      d[1] = q * c[0] - c[2];
      d[2] = c[3] * ip;
      d[3] = q * c[2] - (j == 0 ? g(x) : 0.0);
    }
  };
  const std::vector<double> init{0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  num::OdeOptions opt;
  opt.initial_steps = std::max(tol::ode_min_steps, interval::shooting_steps(problem, 0.0, tol::ode_step_target) / 2);
  const OdeSolution s = num::solve_ode_ivp(rhs, init, problem.x0(), problem.x1(), opt);
  const auto e = s.back();
  const Matrix B{{e[4], e[8]}, {e[5], e[9]}};
  const auto c = num::solve(B, {-e[0], -e[1]});

  const auto fam0 = interval::mu_family(problem, 0.0);
  const std::vector<double> F{num::inner_product(fam0.k1.k, f), num::inner_product(fam0.k2.k, f)};
  const auto coef = num::cholesky_solve(num::cholesky(fam0.gram), F);

  std::vector<double> grid(s.grid), aw(s.size()), daw(s.size());
  grid.back() = problem.x1();
  double diff = 0.0;
  double fmax = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto y = s.at(i);
    const double x = grid[i];
    aw[i] = y[2] + c[0] * y[6] + c[1] * y[10];
    daw[i] = (y[3] + c[0] * y[7] + c[1] * y[11]) / problem.p(x);
    const double target = f(x) - coef[0] * fam0.k1.k(x) - coef[1] * fam0.k2.k(x);
    diff = std::max(diff, std::abs(aw[i] - target));
    fmax = std::max(fmax, std::abs(f(x)));
  }
  ProjectionCheck out;
  out.residual = fmax > 0.0 ? diff / fmax : diff;
  out.aw = num::SampledFunction(std::move(grid), std::move(aw), std::move(daw));
  return out;
}

}  // namespace kreinlab::ext
