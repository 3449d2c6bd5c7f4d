#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kreinlab/numkernel/matrix.hpp"
#include "kreinlab/numkernel/sampled_function.hpp"
#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::interval {

using Coefficient = std::function<double(double)>;

/// A u = −(p u′)′ + (q + shift) u on (x0, x1) with p ≥ p_min > 0.
/// Immutable after construction.
class SturmLiouvilleProblem {
 public:
  /// With `shift` absent the shift is chosen so that the smallest Dirichlet
  /// eigenvalue is at least 1 (zero if it already is). An explicit shift is
  /// used as given. Throws std::invalid_argument if p is not positive on the
  /// sample grid or the shifted Dirichlet realization is not positive.
  SturmLiouvilleProblem(Coefficient p, Coefficient q, double x0, double x1, std::optional<double> shift = std::nullopt);

  /// p = 1, q = 0 on (0, 1).
  static SturmLiouvilleProblem unit_interval();

  double p(double x) const { return p_(x); }
  /// Shifted potential q + shift.
  double q(double x) const { return q_(x) + shift_; }
  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double length() const { return x1_ - x0_; }
  double shift() const { return shift_; }
  double p_min() const { return p_min_; }
  double q_min() const { return q_min_ + shift_; }
  double q_max_abs() const;
  /// ∫ p^{−1/2}: eigenvalue spacing is π/L_eff in the √λ scale.
  double effective_length() const { return eff_len_; }
  /// Smallest Dirichlet eigenvalue m(A_γ) of the shifted problem.
  double lambda1() const { return lambda1_; }

 private:
  struct Unshifted {};
  SturmLiouvilleProblem(Unshifted, Coefficient p, Coefficient q, double x0, double x1);
  void sample_coefficients();

  Coefficient p_;
  Coefficient q_;
  double x0_ = 0.0;
  double x1_ = 1.0;
  double shift_ = 0.0;
  double p_min_ = 1.0;
  double q_min_ = 0.0;
  double q_max_ = 0.0;
  double eff_len_ = 1.0;
  double lambda1_ = 0.0;
};

/// γu = (u(x0), u(x1)); χu = ((p u′)(x0), −(p u′)(x1)) (interior normal).
struct TraceData {
  std::array<double, 2> gamma{};
  std::array<double, 2> chi{};
};

enum class Accuracy { accurate, coarse };

/// Values at x1 of the solutions of (A − λ)y = 0 with (y, p y′)(x0) = (1, 0)
/// and (0, 1). All four entries carry the common factor exp(log_scale).
struct EndpointMatrix {
  double y1 = 0.0;
  double y2 = 0.0;
  double w1 = 0.0;  // (p y1′)(x1)
  double w2 = 0.0;  // (p y2′)(x1)
  double log_scale = 0.0;
};

/// RK4 step count for the homogeneous equation at spectral parameter λ.
int shooting_steps(const SturmLiouvilleProblem& problem, double lambda, double target);

EndpointMatrix endpoint_matrix(const SturmLiouvilleProblem& problem, double lambda,
                               Accuracy accuracy = Accuracy::accurate);

struct FundamentalPair {
  num::SampledFunction y1;  // (y, p y′)(x0) = (1, 0), derivatives y′
  num::SampledFunction y2;  // (y, p y′)(x0) = (0, 1)
  std::vector<double> flux1;  // p y1′ on the grid
  std::vector<double> flux2;
  TraceData trace1;
  TraceData trace2;
  /// max |W(x) − W(x0)| over the grid relative to the size of the two
  /// products in W = y1·p y2′ − p y1′·y2 (W(x0) = 1).
  double wronskian_deviation = 0.0;
};

FundamentalPair fundamental_pair(const SturmLiouvilleProblem& problem, double lambda);

/// Ascending grid in λ that is uniform in σ = sign(λ)√|λ| with `density`
/// points per expected eigenvalue gap π/L_eff; endpoints included exactly.
std::vector<double> spectral_grid(double lo, double hi, double effective_length,
                                  int density = tol::root_scan_density);

/// First `count` Dirichlet eigenvalues (roots of λ ↦ y2(x1; λ)). Throws
/// ConvergenceError if the scan budget runs out first.
std::vector<double> dirichlet_eigenvalues(const SturmLiouvilleProblem& problem, int count);

/// A μ-harmonic function: (A − μ)k = 0 with prescribed trace, sampled with
/// derivatives; flux holds p k′ on the same grid.
struct HarmonicFunction {
  num::SampledFunction k;
  std::vector<double> flux;
  TraceData trace;
};

struct DtnMatrix {
  double mu = 0.0;
  num::SymMatrix P;
  /// |P12 − P21| before symmetrization, relative to max |P_ij|.
  double asymmetry = 0.0;
};

struct MuFamily {
  double mu = 0.0;
  /// k1 has γk1 = (1, 0), k2 has γk2 = (0, 1).
  HarmonicFunction k1;
  HarmonicFunction k2;
  num::SymMatrix gram;  // (k_i, k_j) in L²
  DtnMatrix dtn;
};

/// Harmonic basis, Gram matrix and DtN matrix at μ. k2 is shot forward from
/// x0 and k1 backward from x1, so both are computed along their growing
/// direction and stay accurate for large negative μ. Throws
/// SingularSolveError when μ is (numerically) a Dirichlet eigenvalue.
MuFamily mu_family(const SturmLiouvilleProblem& problem, double mu);

/// DtN matrix only; no samples stored. Cheap for very negative μ. The
/// asymmetry guard applies to accurate solves only.
DtnMatrix dtn_matrix(const SturmLiouvilleProblem& problem, double mu, Accuracy accuracy = Accuracy::accurate);

num::SymMatrix gram_matrix(const SturmLiouvilleProblem& problem, double mu);

/// u with (A − μ)u = 0, γu = φ.
num::SampledFunction poisson_solve(const SturmLiouvilleProblem& problem, double mu, std::array<double, 2> phi);

/// u with (A − μ)u = f, γu = φ. The particular part is integrated as an
/// initial-value problem from x0 and corrected by the Poisson solution.
num::SampledFunction resolvent_dirichlet(const SturmLiouvilleProblem& problem, double mu,
                                         const std::function<double(double)>& f, std::array<double, 2> phi);
num::SampledFunction resolvent_dirichlet(const SturmLiouvilleProblem& problem, double mu,
                                         const num::SampledFunction& f, std::array<double, 2> phi);

/// Traces of a sampled function with derivatives, using p at the ends.
TraceData traces(const SturmLiouvilleProblem& problem, const num::SampledFunction& u);

}  // namespace kreinlab::interval
