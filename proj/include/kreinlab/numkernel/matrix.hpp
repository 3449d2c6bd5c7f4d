#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kreinlab::num {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<double> column(std::size_t j) const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Matrix transposed() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Real symmetric matrix in full storage. Every constructor symmetrizes, and
/// the only mutator writes both (i,j) and (j,i), so entries(i,j) == entries(j,i)
/// holds bitwise.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0);
  /// Takes (A + Aᵀ)/2 of a square matrix.
  explicit SymMatrix(const Matrix& a);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add(std::size_t i, std::size_t j, double v);

  const Matrix& full() const { return m_; }

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

 private:
  std::size_t n_ = 0;
  Matrix m_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

double frobenius_norm(const Matrix& a);
double frobenius_norm(const SymMatrix& a);
double max_abs(const Matrix& a);
double max_abs(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Congruence Bᵀ A B, symmetric by construction.
SymMatrix congruence(const SymMatrix& a, const Matrix& b);

/// Lower Cholesky factor; throws SingularSolveError if `a` is not positive
/// definite.
Matrix cholesky(const SymMatrix& a);
/// Solves (L Lᵀ) X = B in place of B.
void cholesky_solve(const Matrix& lower, Matrix& b);
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);
SymMatrix spd_inverse(const SymMatrix& a);

/// LU with partial pivoting. Small systems only (boundary determinants).
double determinant(Matrix a);
std::vector<double> solve(Matrix a, std::vector<double> b);

/// Orthonormal basis for the column span of `a` (two passes of modified
/// Gram–Schmidt); columns whose residual norm drops below
/// `rank_tol`·(original norm) are discarded.
Matrix orthonormal_columns(const Matrix& a, double rank_tol = 1e-10);

}  // namespace kreinlab::num
