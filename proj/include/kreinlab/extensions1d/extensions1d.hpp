#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kreinlab/interval1d/interval1d.hpp"
#include "kreinlab/numkernel/fit.hpp"
#include "kreinlab/numkernel/matrix.hpp"

namespace kreinlab::ext {

using interval::SturmLiouvilleProblem;
using num::SymMatrix;

/// Boundary condition γu ∈ X, π(χu − P⁰γu) = Lγu, with X = range(π).
/// π is an orthogonal projection on ℝ² and L a symmetric matrix with
/// L = πLπ (stored in trace coordinates).
class BoundaryConditionSpec {
 public:
  /// Throws std::invalid_argument unless π² = π = πᵀ and L = πLπ (1e−12).
  BoundaryConditionSpec(SymMatrix pi, SymMatrix L);

  static BoundaryConditionSpec dirichlet();
  /// π = I with the given L.
  static BoundaryConditionSpec full(SymMatrix L);
  /// X spanned by the unit vector `direction`, L = ℓ·(direction directionᵀ).
  static BoundaryConditionSpec rank_one(std::array<double, 2> direction, double ell);

  const SymMatrix& pi() const { return pi_; }
  const SymMatrix& L() const { return L_; }
  int rank() const { return rank_; }
  /// Orthonormal basis of X (2 × rank) and of its complement (2 × (2 − rank)).
  const num::Matrix& range_basis() const { return U_; }
  const num::Matrix& null_basis() const { return V_; }

 private:
  SymMatrix pi_;
  SymMatrix L_;
  int rank_ = 0;
  num::Matrix U_;
  num::Matrix V_;
};

/// π = I, L_a = a·M_{Z⁰} (Gram matrix of the μ = 0 harmonic basis).
BoundaryConditionSpec krein_bcspec(const SturmLiouvilleProblem& problem, double a);

/// Realization of a spec on a problem (copied); caches P⁰. Immutable.
class Realization {
 public:
  Realization(const SturmLiouvilleProblem& problem, BoundaryConditionSpec spec);

  const SturmLiouvilleProblem& problem() const { return problem_; }
  const BoundaryConditionSpec& spec() const { return spec_; }
  const SymMatrix& p0() const { return p0_; }

  /// Characteristic determinant: the 2×2 boundary matrix on the fundamental
  /// pair, each column divided by the norm of its solution's data. Continuous
  /// in λ and zero exactly at eigenvalues.
  double determinant(double lambda, interval::Accuracy accuracy = interval::Accuracy::accurate) const;

 private:
  SturmLiouvilleProblem problem_;
  BoundaryConditionSpec spec_;
  SymMatrix p0_;
};

double char_determinant(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec, double lambda);

enum class Method { shooting, buckling, reduction };
std::string to_string(Method m);

struct RealizationSpectrum {
  std::vector<double> eigenvalues;
  Method method = Method::shooting;
  std::optional<double> certificate;
};

/// All eigenvalues in [lo, hi] from the characteristic determinant. Roots
/// where the determinant touches zero (double or exponentially close pairs)
/// are detected as well. Throws NumericError for a degenerate spec whose
/// determinant vanishes identically.
RealizationSpectrum realization_eigenvalues(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec,
                                            double lo, double hi);

struct TmuForm {
  double mu = 0.0;
  SymMatrix L_mu;            // Uᵀ(L + P⁰ − P^μ)U on X
  SymMatrix gram_mu;         // Uᵀ M_{Z_μ} U
  SymMatrix gram_z0;         // Uᵀ M_{Z⁰} U
  double m_tmu = 0.0;        // pencil minimum against gram_mu
  double m_tmu_z0 = 0.0;     // pencil minimum against gram_z0
};

/// Requires μ < m(A_γ). Rank-0 specs give m = +∞.
TmuForm tmu_form(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec, double mu);

/// m(T)m(A_γ)/(m(T) + m(A_γ)); requires m(A_γ) > 0 and mT > −m(A_γ).
double birman_bound(double mT, double mAgamma);

/// Geometric grid used by default for certification: −10^{−2} … −10^{6}
/// (four points per decade), 0, and fractions of m(A_γ) below it.
std::vector<double> default_certificate_grid(const SturmLiouvilleProblem& problem);

struct Certificate {
  std::optional<double> mu_star;
  /// Grid point that certified before refinement.
  std::optional<double> grid_point;
  int evaluations = 0;
};

/// Largest grid μ < m(A_γ) with m(T^μ) ≥ 0 (for negative grids: the one of
/// smallest |μ|), then refined by bisection towards the next failing grid
/// point and backed off slightly; the returned μ* itself satisfies
/// m(T^{μ*}) ≥ 0, so m(Ã) ≥ μ*. Absent when no grid point qualifies.
Certificate lower_bound_certificate(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec,
                                    std::vector<double> grid);

struct GmuRow {
  double mu = 0.0;
  double m_gmu = 0.0;
};

struct GmuScan {
  std::vector<GmuRow> rows;  // input order
  std::optional<num::FitResult> fit;
};

/// m(G^μ) = smallest eigenvalue of the pencil (P⁰ − P^μ, M_{Z⁰}). The fit of
/// m(G^μ) against |μ| uses [fit_lo, fit_hi] in |μ| when given, otherwise the
/// largest decade of the sample (all positive rows if that has fewer than 3).
GmuScan gmu_scan(const SturmLiouvilleProblem& problem, const std::vector<double>& mus,
                 std::optional<std::pair<double, double>> fit_window = std::nullopt);

struct DtnDifference {
  double residual = 0.0;  // max-entry difference
  double q_norm = 0.0;    // max |(P⁰ − P^μ)_ij|
};

/// Compares P⁰ − P^μ with −μ[(k_i^μ, k_j⁰)].
DtnDifference dtn_difference_check(const SturmLiouvilleProblem& problem, double mu);

struct ResolventCheck {
  double residual = 0.0;  // ‖u1 − u2‖∞ / ‖u1‖∞
  num::SampledFunction direct;  // u1
  num::SampledFunction krein;   // u2
};

/// u1 solves Au = f under the boundary condition directly; u2 is
/// A_γ⁻¹f + K U (UᵀLU)⁻¹ Uᵀ[(f, k_j⁰)]. Throws SingularSolveError if Ã or T
/// is not invertible.
ResolventCheck krein_resolvent_check(const SturmLiouvilleProblem& problem, const BoundaryConditionSpec& spec,
                                     const std::function<double(double)>& f);

/// Roots of the clamped buckling determinant for A²v = λAv, ascending.
std::vector<double> buckling_eigenvalues(const SturmLiouvilleProblem& problem, int count);
/// Buckling roots inside [lo, hi].
std::vector<double> buckling_eigenvalues(const SturmLiouvilleProblem& problem, double lo, double hi);

struct ReductionSpectrum {
  std::vector<double> eigenvalues;
  /// True when the scan function itself vanishes at λ = a (never returned
  /// as an eigenvalue).
  bool a_is_root = false;
};

/// Eigenvalues of A_a from the sixth-order problem A³v = λA²v,
/// γv = νv = 0, (λ − a)γA²v = λ²γAv. A gap of half-width krein_gap
/// around λ = a is excluded from the window.
ReductionSpectrum reduction_eigenvalues(const SturmLiouvilleProblem& problem, double a, double lo, double hi);

struct ProjectionCheck {
  double residual = 0.0;  // ‖Aw − (f − pr_Z f)‖∞ / ‖f‖∞ on the grid
  num::SampledFunction aw;
};

/// Solves the clamped problem A²w = Af, γw = νw = 0 and compares Aw with
/// f − pr_Z f. f is given with its first two derivatives.
ProjectionCheck projection_check(const SturmLiouvilleProblem& problem, const std::function<double(double)>& f,
                                 const std::function<double(double)>& df, const std::function<double(double)>& d2f);

}  // namespace kreinlab::ext
