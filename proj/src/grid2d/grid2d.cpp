#include "kreinlab/grid2d/grid2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kreinlab/numkernel/eigen.hpp"
#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::grid {

namespace {

constexpr int kPowerIterations = 5000;
constexpr double kPowerTol = 1e-14;
constexpr double kRankTol = 1e-10;

// Largest eigenvalue of an SPD matrix by power iteration with Rayleigh quotients.
double top_eigenvalue(const SymMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  double rq = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    const double nv = num::norm2(v);
    for (double& x : v) x /= nv;
    const auto w = m.full() * std::span<const double>(v);
    const double next = num::dot(v, w);
    v = w;
    if (it > 2 && std::abs(next - rq) <= kPowerTol * std::abs(next)) return next;
    rq = next;
  }
  return rq;
}

}  // namespace

GridModel build_model(int m1, int m2, const Potential& potential, int max_side) {
  if (m1 < 4 || m2 < 4) throw std::invalid_argument("build_model: M1, M2 must be >= 4");
  if (m1 > max_side || m2 > max_side) throw std::invalid_argument("build_model: side count above the dense-storage cap");
  GridModel g;
  g.m1 = m1;
  g.m2 = m2;
  g.h = 1.0 / (m1 + 1);
  g.d = static_cast<std::size_t>(m1) * m2;
  g.b = static_cast<std::size_t>(2 * (m1 + m2) - 4);
  g.A = SymMatrix(g.d);
  const double k = 1.0 / (g.h * g.h);
  double gersh = 0.0;
  for (int j = 0; j < m2; ++j)
    for (int i = 0; i < m1; ++i) {
      const std::size_t n = g.index(i, j);
      const double v = potential ? potential((i + 1) * g.h, (j + 1) * g.h) : 0.0;
      if (!std::isfinite(v)) throw std::invalid_argument("build_model: non-finite potential");
      g.A.set(n, n, 4.0 * k + v);
      if (i + 1 < m1) g.A.set(n, g.index(i + 1, j), -k);
      if (j + 1 < m2) g.A.set(n, g.index(i, j + 1), -k);
      gersh = std::max(gersh, 8.0 * k + v);
    }
  g.lambda_max = gersh;
  g.A_inv = num::spd_inverse(g.A);
  g.lambda_min = 1.0 / top_eigenvalue(g.A_inv);
  if (!(g.lambda_min > 0.0)) throw SingularSolveError("build_model: A_h is not positive definite");
  return g;
}

std::vector<double> laplacian_eigenvalues(int m1, int m2) {
  const double h = 1.0 / (m1 + 1);
  std::vector<double> out;
  for (int p = 1; p <= m1; ++p)
    for (int q = 1; q <= m2; ++q) {
      const double sx = std::sin(p * std::numbers::pi * h / 2.0);
      const double sy = std::sin(q * std::numbers::pi / (2.0 * (m2 + 1)));
      out.push_back(4.0 / (h * h) * (sx * sx + sy * sy));
    }
  std::sort(out.begin(), out.end());
  return out;
}

SymMatrix HarmonicBasis::pr_Z() const { return SymMatrix(Q * Q.transposed()); }

SymMatrix HarmonicBasis::pr_R() const {
  SymMatrix r = SymMatrix::identity(Q.rows());
  r -= pr_Z();
  return r;
}

HarmonicBasis harmonic_basis(const GridModel& model) {
  const int m1 = model.m1;
  const int m2 = model.m2;
  const double k = 1.0 / (model.h * model.h);
  HarmonicBasis hb;
  // Boundary nodes without corners: bottom, top (M₁ each), left, right (M₂ each).
  hb.C = Matrix(model.d, static_cast<std::size_t>(2 * (m1 + m2)));
  std::size_t col = 0;
  for (int i = 0; i < m1; ++i) hb.C(model.index(i, 0), col++) = -k;
  for (int i = 0; i < m1; ++i) hb.C(model.index(i, m2 - 1), col++) = -k;
  for (int j = 0; j < m2; ++j) hb.C(model.index(0, j), col++) = -k;
  for (int j = 0; j < m2; ++j) hb.C(model.index(m1 - 1, j), col++) = -k;
  hb.Z = model.A_inv.full() * hb.C;
  hb.Z *= -1.0;
  hb.Q = num::orthonormal_columns(hb.Z, kRankTol);
  if (hb.Q.cols() != model.b) throw NumericError("harmonic_basis: unexpected rank of the harmonic space");
  return hb;
}

SymMatrix krein_inverse(const GridModel& model, const HarmonicBasis& basis, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw std::invalid_argument("krein_inverse: a must be finite and nonzero");
  SymMatrix out = model.A_inv;
  out += (1.0 / a) * basis.pr_Z();
  return out;
}

Decomposition decompose(const GridModel& model, const HarmonicBasis& basis, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw std::invalid_argument("decompose: a must be finite and nonzero");
  const Matrix& q = basis.Q;
  const Matrix& ainv = model.A_inv.full();
  const Matrix u = ainv * q;                // A⁻¹Q
  const Matrix w = q.transposed() * u;      // QᵀA⁻¹Q
  const Matrix qut = q * u.transposed();    // Q QᵀA⁻¹ = pr_Z A⁻¹
  const Matrix zz = q * (w * q.transposed());  // pr_Z A⁻¹ pr_Z
  Decomposition dc;
  dc.a = a;
  // pr_R A⁻¹ pr_R = A⁻¹ − pr_Z A⁻¹ − A⁻¹ pr_Z + pr_Z A⁻¹ pr_Z.
  Matrix b1 = ainv - qut - qut.transposed() + zz;
  dc.B1 = SymMatrix(b1);
  dc.B2 = (1.0 / a) * basis.pr_Z();
  dc.S = SymMatrix(qut + qut.transposed() - zz);
  return dc;
}

std::vector<double> s_numbers(const SymMatrix& s) {
  auto ev = num::sym_eigenvalues(s);
  for (double& x : ev) x = std::abs(x);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

std::vector<double> boundary_s_numbers(const GridModel& model, const HarmonicBasis& basis) {
  const Matrix& q = basis.Q;
  const Matrix u = model.A_inv.full() * q;
  const std::size_t b = q.cols();
  Matrix both(model.d, 2 * b);
  for (std::size_t i = 0; i < model.d; ++i)
    for (std::size_t c = 0; c < b; ++c) {
      both(i, c) = q(i, c);
      both(i, b + c) = u(i, c);
    }
  const Matrix v = num::orthonormal_columns(both, kRankTol);
  // S = Q Uᵀ + U Qᵀ − Q W Qᵀ, applied to V column by column.
  const Matrix w = q.transposed() * u;
  const Matrix qv = q.transposed() * v;  // b × r
  const Matrix uv = u.transposed() * v;
  const Matrix sv = q * uv + u * qv - q * (w * qv);
  auto s = s_numbers(SymMatrix(v.transposed() * sv));
  s.resize(model.d, 0.0);
  return s;
}

num::FitResult snumber_slope(std::span<const double> s, int j_lo, int j_hi) {
  if (j_lo < 1 || j_hi < j_lo || static_cast<std::size_t>(j_hi) > s.size())
    throw std::invalid_argument("snumber_slope: window outside 1..size");
  std::vector<double> j, v;
  for (int k = j_lo; k <= j_hi; ++k)
    if (s[k - 1] > 0.0) {
      j.push_back(k);
      v.push_back(s[k - 1]);
    }
  if (j.size() < 3) throw std::invalid_argument("snumber_slope: fewer than three positive values in window");
  return num::loglog_fit(j, v);
}

num::FitResult snumber_slope(const SymMatrix& S, int j_lo, int j_hi) {
  const auto s = s_numbers(S);
  return snumber_slope(s, j_lo, j_hi);
}

std::vector<GmuGridRow> gmu_grid_scan(const GridModel& model, const HarmonicBasis& basis,
                                      const std::vector<double>& mus) {
  for (double mu : mus)
    if (!(mu < model.lambda_min)) throw std::invalid_argument("gmu_grid_scan: mu must lie below lambda_min(A_h)");
  const Matrix& q = basis.Q;
  std::vector<GmuGridRow> rows;
  for (double mu : mus) {
    if (mu == 0.0) {
      rows.push_back({mu, 0.0});
      continue;
    }
    SymMatrix shifted = model.A;
    for (std::size_t i = 0; i < model.d; ++i) shifted.add(i, i, -mu);
    Matrix x = q;
    num::cholesky_solve(num::cholesky(shifted), x);
    // −μ Qᵀ(Q + μ X)
    Matrix y = q;
    for (std::size_t i = 0; i < y.data().size(); ++i) y.data()[i] += mu * x.data()[i];
    SymMatrix g(q.transposed() * y);
    g *= -mu;
    rows.push_back({mu, num::sym_eigenvalues(g).front()});
  }
  return rows;
}

ClusterReport spectrum_and_cluster(const GridModel& model, const HarmonicBasis& basis, double a, double r,
                                   double radius) {
  if (a == 0.0) throw std::invalid_argument("spectrum_and_cluster: a must be nonzero");
  if (!(r > a)) throw std::invalid_argument("spectrum_and_cluster: need r > a");
  ClusterReport rep;
  rep.a = a;
  rep.radius = radius;
  rep.boundary_count = basis.rank();
  for (double x : num::sym_eigenvalues(krein_inverse(model, basis, a)))
    if (std::abs(x) > tol::zero_eigen_guard) rep.eigenvalues.push_back(1.0 / x);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
  for (double l : rep.eigenvalues) {
    if (std::abs(l - a) <= radius) ++rep.cluster_count;
    if (l >= r) rep.above_r.push_back(l);
  }
  return rep;
}

}  // namespace kreinlab::grid
