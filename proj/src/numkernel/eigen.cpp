#include "kreinlab/numkernel/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kreinlab/numkernel/errors.hpp"

namespace kreinlab::num {

EigenDecomposition sym_eigen(const SymMatrix& input, int max_sweeps) {
  const std::size_t n = input.dim();
  Matrix a = input.full();
  Matrix v = Matrix::identity(n);
  for (double x : a.data())
    if (!std::isfinite(x)) throw std::invalid_argument("sym_eigen: non-finite entry");

  const double scale = frobenius_norm(a);
  bool converged = (n <= 1) || scale == 0.0;
  for (int sweep = 1; sweep <= max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    double off_abs = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        off += a(p, q) * a(p, q);
        off_abs += std::abs(a(p, q));
      }
    if (off == 0.0 || std::sqrt(off) <= 1e-15 * scale) {
      converged = true;
      break;
    }
    // Threshold sweeps: skip small rotations early on.
    const double thresh = sweep < 4 ? 0.2 * off_abs / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (sweep > 4 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) <= thresh) continue;
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          a(k, p) = np;
          a(p, k) = np;
          a(k, q) = nq;
          a(q, k) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (!(off == 0.0 || std::sqrt(off) <= 1e-15 * scale))
      throw ConvergenceError("sym_eigen: Jacobi did not converge in " + std::to_string(max_sweeps) +
                             " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

// Householder reduction to tridiagonal form (diagonal d, subdiagonal e with
// e[i] coupling i-1 and i). Full symmetric rank-2 updates keep the inner loops
// contiguous in row-major storage.
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<double> v(n), p(n);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    if (l == 0) {
      e[i] = a(i, 0);
      continue;
    }
    double scale = 0.0;
    for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
    if (scale == 0.0) {
      e[i] = a(i, l);
      continue;
    }
    double sigma = 0.0;
    for (std::size_t k = 0; k <= l; ++k) {
      v[k] = a(i, k) / scale;
      sigma += v[k] * v[k];
    }
    const double f = v[l];
    const double alpha = f >= 0.0 ? -std::sqrt(sigma) : std::sqrt(sigma);
    e[i] = scale * alpha;
    const double h = sigma - f * alpha;
    v[l] = f - alpha;
    // p = B v / h, K = vᵀp / 2h, q = p − K v, B ← B − v qᵀ − q vᵀ.
    double vp = 0.0;
    for (std::size_t r = 0; r <= l; ++r) {
      const double* ar = a.row(r).data();
      double s = 0.0;
      for (std::size_t k = 0; k <= l; ++k) s += ar[k] * v[k];
      p[r] = s / h;
      vp += v[r] * p[r];
    }
    const double kk = vp / (2.0 * h);
    for (std::size_t r = 0; r <= l; ++r) p[r] -= kk * v[r];
    for (std::size_t r = 0; r <= l; ++r) {
      double* ar = a.row(r).data();
      const double vr = v[r];
      const double qr = p[r];
      for (std::size_t k = 0; k <= l; ++k) ar[k] -= vr * p[k] + qr * v[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
}

void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  // Absolute floor: blocks of negligible entries (rank-deficient input) never
  // meet the relative test.
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) tnorm = std::max(tnorm, std::abs(d[i]) + std::abs(e[i]));
  const double deflate_floor = eps * tnorm;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= deflate_floor) break;
      }
      if (m != l) {
        if (iter++ == tol::ql_max_iterations) throw ConvergenceError("sym_eigenvalues: QL iteration budget exceeded");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool deflated = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> sym_eigenvalues(const SymMatrix& input) {
  Matrix a = input.full();
  for (double x : a.data())
    if (!std::isfinite(x)) throw std::invalid_argument("sym_eigenvalues: non-finite entry");
  if (a.rows() == 0) return {};
  std::vector<double> d, e;
  tridiagonalize(a, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> gen_eigen(const SymMatrix& a, const SymMatrix& m) {
  if (a.dim() != m.dim()) throw std::invalid_argument("gen_eigen: dimension mismatch");
  const std::size_t n = a.dim();
  if (n == 0) return {};
  const Matrix l = cholesky(m);
  // C = L⁻¹ A L⁻ᵀ: solve L X = A, then L Cᵀ = Xᵀ.
  Matrix x = a.full();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, j);
      x(i, j) = s / l(i, i);
    }
  }
  Matrix xt = x.transposed();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = xt(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * xt(k, j);
      xt(i, j) = s / l(i, i);
    }
  }
  return sym_eigen(SymMatrix(xt)).eigenvalues;
}

double pencil_min(const SymMatrix& a, const SymMatrix& m) {
  if (a.dim() == 0) return std::numeric_limits<double>::infinity();
  return gen_eigen(a, m).front();
}

}  // namespace kreinlab::num
