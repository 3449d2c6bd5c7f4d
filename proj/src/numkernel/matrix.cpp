#include "kreinlab/numkernel/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "kreinlab/numkernel/errors.hpp"

namespace kreinlab::num {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: data size mismatch");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("Matrix +=: shape");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("Matrix -=: shape");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix *: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("Matrix * vector: size mismatch");
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

SymMatrix::SymMatrix(std::size_t n, double fill) : n_(n), m_(n, n, fill) {}

SymMatrix::SymMatrix(const Matrix& a) : n_(a.rows()), m_(a.rows(), a.rows()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix: matrix not square");
  for (std::size_t i = 0; i < n_; ++i) {
    m_(i, i) = a(i, i);
    for (std::size_t j = i + 1; j < n_; ++j) set(i, j, 0.5 * (a(i, j) + a(j, i)));
  }
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(Matrix(rows)) {}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

void SymMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i == j) {
    m_(i, i) += v;
  } else {
    set(i, j, m_(i, j) + v);
  }
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  m_ += other.m_;
  return *this;
}
SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  m_ -= other.m_;
  return *this;
}
SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }
double frobenius_norm(const SymMatrix& a) { return norm2(a.full().data()); }

double max_abs(const Matrix& a) { return max_abs(a.data()); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SymMatrix congruence(const SymMatrix& a, const Matrix& b) {
  return SymMatrix(b.transposed() * (a.full() * b));
}

Matrix cholesky(const SymMatrix& a) {
  const std::size_t n = a.dim();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    const double* lj = l.row(j).data();
    for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0)) throw SingularSolveError("cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double* li = l.row(i).data();
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      l(i, j) = s / ljj;
    }
  }
  return l;
}

void cholesky_solve(const Matrix& lower, Matrix& b) {
  const std::size_t n = lower.rows();
  const std::size_t m = b.cols();
  if (b.rows() != n) throw std::invalid_argument("cholesky_solve: shape");
  // Forward: L Y = B, row-oriented so the inner loop is contiguous.
  for (std::size_t i = 0; i < n; ++i) {
    double* bi = b.row(i).data();
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = lower(i, k);
      if (lik == 0.0) continue;
      const double* bk = b.row(k).data();
      for (std::size_t j = 0; j < m; ++j) bi[j] -= lik * bk[j];
    }
    const double inv = 1.0 / lower(i, i);
    for (std::size_t j = 0; j < m; ++j) bi[j] *= inv;
  }
  // Backward: Lᵀ X = Y.
  for (std::size_t ii = n; ii-- > 0;) {
    double* bi = b.row(ii).data();
    const double inv = 1.0 / lower(ii, ii);
    for (std::size_t j = 0; j < m; ++j) bi[j] *= inv;
    for (std::size_t k = 0; k < ii; ++k) {
      const double lik = lower(ii, k);
      if (lik == 0.0) continue;
      double* bk = b.row(k).data();
      for (std::size_t j = 0; j < m; ++j) bk[j] -= lik * bi[j];
    }
  }
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b) {
  Matrix rhs(b.size(), 1, std::vector<double>(b.begin(), b.end()));
  cholesky_solve(lower, rhs);
  return rhs.column(0);
}

SymMatrix spd_inverse(const SymMatrix& a) {
  const Matrix l = cholesky(a);
  Matrix x = Matrix::identity(a.dim());
  cholesky_solve(l, x);
  return SymMatrix(x);
}

namespace {

// In-place LU with partial pivoting; returns the permutation sign, or 0 when
// a zero pivot is met.
int lu_factor(Matrix& a, std::vector<std::size_t>& perm) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return sign;
}

}  // namespace

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
  std::vector<std::size_t> perm;
  const int sign = lu_factor(a, perm);
  if (sign == 0) return 0.0;
  double det = sign;
  for (std::size_t i = 0; i < a.rows(); ++i) det *= a(i, i);
  return det;
}

std::vector<double> solve(Matrix a, std::vector<double> b) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw std::invalid_argument("solve: shape");
  std::vector<std::size_t> perm;
  if (lu_factor(a, perm) == 0) throw SingularSolveError("solve: singular matrix");
  const std::size_t n = a.rows();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * x[k];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a(ii, k) * x[k];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

Matrix orthonormal_columns(const Matrix& a, double rank_tol) {
  const std::size_t m = a.rows();
  // Work column-major for contiguous Gram–Schmidt updates.
  std::vector<std::vector<double>> basis;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<double> v = a.column(j);
    const double original = norm2(v);
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double c = dot(q, v);
        for (std::size_t i = 0; i < m; ++i) v[i] -= c * q[i];
      }
    }
    const double r = norm2(v);
    if (r <= rank_tol * original) continue;
    for (double& x : v) x /= r;
    basis.push_back(std::move(v));
  }
  Matrix q(m, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < m; ++i) q(i, j) = basis[j][i];
  return q;
}

}  // namespace kreinlab::num
