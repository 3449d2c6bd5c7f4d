#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kreinlab/numkernel/fit.hpp"
#include "kreinlab/numkernel/matrix.hpp"

namespace kreinlab::grid {

using num::Matrix;
using num::SymMatrix;
using Potential = std::function<double(double, double)>;

/// Dirichlet 5-point Laplacian on the interior nodes of a rectangle with
/// spacing h = 1/(M₁+1) (the unit square when M₁ = M₂), plus a sampled
/// potential on the diagonal. Node (i, j), 0 ≤ i < M₁, 0 ≤ j < M₂, sits at
/// ((i+1)h, (j+1)h) and has index j·M₁ + i.
struct GridModel {
  int m1 = 0;
  int m2 = 0;
  double h = 0.0;
  std::size_t d = 0;  // interior dimension
  std::size_t b = 0;  // interior nodes adjacent to the boundary
  SymMatrix A;
  SymMatrix A_inv;
  double lambda_min = 0.0;
  double lambda_max = 0.0;  // Gershgorin bound

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * m1 + i; }
};

inline constexpr int kDefaultMaxSide = 48;

/// Requires 4 ≤ M₁, M₂ ≤ max_side. Throws SingularSolveError if A_h is not SPD.
GridModel build_model(int m1, int m2, const Potential& potential = {}, int max_side = kDefaultMaxSide);

/// Closed-form Dirichlet eigenvalues of the zero-potential model, ascending.
std::vector<double> laplacian_eigenvalues(int m1, int m2);

/// Discrete harmonic extensions of boundary unit data: column k of Z solves
/// A_h z + C e_k = 0 where C couples boundary node k to its interior
/// neighbour. Q is an orthonormal basis of range(Z), of dimension b.
struct HarmonicBasis {
  Matrix Z;
  Matrix C;
  Matrix Q;

  std::size_t rank() const { return Q.cols(); }
  SymMatrix pr_Z() const;
  SymMatrix pr_R() const;
};

HarmonicBasis harmonic_basis(const GridModel& model);

/// A_h^{−1} + a^{−1}pr_Z. Throws std::invalid_argument for a = 0.
SymMatrix krein_inverse(const GridModel& model, const HarmonicBasis& basis, double a);

struct Decomposition {
  double a = 0.0;
  SymMatrix B1;  // pr_R A_h^{−1} pr_R
  SymMatrix B2;  // a^{−1} pr_Z
  SymMatrix S;   // pr_Z A_h^{−1} pr_R + pr_R A_h^{−1} pr_Z + pr_Z A_h^{−1} pr_Z
};

Decomposition decompose(const GridModel& model, const HarmonicBasis& basis, double a);

/// |eigenvalues| in descending order.
std::vector<double> s_numbers(const SymMatrix& s);
/// s-numbers of the S term, computed on the span of Q and A_h^{−1}Q where S
/// lives (rank ≤ 2b), padded with zeros to dimension d.
std::vector<double> boundary_s_numbers(const GridModel& model, const HarmonicBasis& basis);

/// Log–log fit of s_j against j over j ∈ [j_lo, j_hi] (1-based). Throws
/// std::invalid_argument if the window is outside 1..size or has fewer than
/// three positive values.
num::FitResult snumber_slope(std::span<const double> s, int j_lo, int j_hi);
num::FitResult snumber_slope(const SymMatrix& S, int j_lo, int j_hi);

struct GmuGridRow {
  double mu = 0.0;
  double m_gmu = 0.0;
};

/// m(G^μ_h) with G^μ_h = −μ Qᵀ(I + μ(A_h − μ)^{−1})Q. Requires every μ below
/// λ_min(A_h) (std::invalid_argument otherwise).
std::vector<GmuGridRow> gmu_grid_scan(const GridModel& model, const HarmonicBasis& basis,
                                      const std::vector<double>& mus);

struct ClusterReport {
  double a = 0.0;
  double radius = 0.0;
  /// Spectrum of the discrete A_a from the inverse, ascending; eigenvalues
  /// of the inverse with |x| ≤ 1e−12 are dropped.
  std::vector<double> eigenvalues;
  std::size_t cluster_count = 0;  // eigenvalues within `radius` of a
  std::size_t boundary_count = 0;
  std::vector<double> above_r;  // eigenvalues ≥ r, ascending
};

/// Requires a ≠ 0 and r > a.
ClusterReport spectrum_and_cluster(const GridModel& model, const HarmonicBasis& basis, double a, double r,
                                   double radius);

}  // namespace kreinlab::grid
