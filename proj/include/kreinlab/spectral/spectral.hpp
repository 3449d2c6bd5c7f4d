#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kreinlab/numkernel/fit.hpp"
#include "kreinlab/numkernel/matrix.hpp"

namespace kreinlab::spectral {

/// Exact rational with normalized sign and gcd; throws std::overflow_error
/// when an intermediate leaves the 64-bit range.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class Order { ascending, descending_positive };

/// Eigenvalues (or s-numbers) with multiplicity, sorted per order tag.
class EigenSequence {
 public:
  /// Sorts ascending.
  static EigenSequence ascending(std::vector<double> values);
  /// Sorts nonincreasingly; throws std::invalid_argument on a value ≤ 0.
  static EigenSequence descending_positive(std::vector<double> values);
  /// Positive values of `values`, nonincreasing.
  static EigenSequence positive_part(std::span<const double> values);

  const std::vector<double>& values() const { return values_; }
  Order order() const { return order_; }
  std::size_t size() const { return values_.size(); }
  /// 1-based access; zero past the end for descending-positive sequences.
  double operator[](std::size_t j) const;

 private:
  EigenSequence(std::vector<double> v, Order o) : values_(std::move(v)), order_(o) {}
  std::vector<double> values_;
  Order order_;
};

/// μ_j ≈ C j^{−α} with remainder order j^{−β}.
struct AsymptoticModel {
  double C = 1.0;
  double alpha = 1.0;
  double beta = 2.0;
  std::optional<int> n, m, N;
  std::optional<double> c_A;

  /// Throws std::invalid_argument unless C > 0 and β > α > 0.
  static AsymptoticModel make(double C, double alpha, double beta);
  /// α = 2mN/n and C = c′_A = c_A^{2mN/n}.
  static AsymptoticModel from_operator(int n, int m, int N, double c_A, double beta);
};

/// ω_n vol(Ω) / (2π)^n.
double weyl_constant(int n, int m, double volume);

struct WeylEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Principal symbol a⁰(x, ξ), homogeneous of degree 2m in ξ, on the box
/// Π[lo_i, hi_i]. Computes (2π)^{−n}∫dx measure{ξ : a⁰(x, ξ) < 1} by the
/// radial reduction and tensor Gauss quadrature with doubling; n ≤ 3. The
/// error is the change under the last doubling. Throws ConvergenceError when
/// the panel budget is exhausted.
using Symbol = std::function<double(std::span<const double> x, std::span<const double> xi)>;
WeylEstimate weyl_constant(int n, int m, const Symbol& symbol, std::span<const double> lo, std::span<const double> hi,
                           double rel_tol = 1e-9);

/// Count with multiplicity in [r, t]; 0 when r > t.
std::size_t counting_function(const EigenSequence& seq, double r, double t);

struct EquivalenceReport {
  double c1 = 0.0;  // sup_j |μ_j − C j^{−α}| j^{β}
  double c2 = 0.0;  // sup_t |N(t) − (Ct)^{1/α}| t^{−(1+α−β)/α}
  double counting_exponent = 0.0;
  /// Ratio of the last two dyadic block maxima of the scaled remainders
  /// (0 when both vanish).
  double ratio1 = 0.0;
  double ratio2 = 0.0;
  bool eigen_side_holds = false;
  bool counting_side_holds = false;
  bool both_hold = false;
};

/// Both sides of the eigenvalue/counting-function equivalence on a
/// descending-positive sequence μ_j, with N(t) = #{j : μ_j ≥ 1/t}. A side
/// "holds" when its constant is finite and the block ratio is at most 2.
EquivalenceReport counting_eigen_equiv(const EigenSequence& seq, const AsymptoticModel& model);

struct ExponentPair {
  Rational eigen_side;     // (M + θ)/n
  Rational counting_side;  // (n − θ)/M
};
ExponentPair equivalence_exponents(const Rational& M, const Rational& n, const Rational& theta);

struct KyFanReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  /// min over checks of (rhs − lhs), relative to the scale.
  double worst_margin = 0.0;
  std::size_t positive_in_S = 0;  // K
  std::size_t k_checked = 0;
  std::size_t k_violations = 0;
  double scale = 0.0;
};

/// μ_{j+k−1,+}(B+S) ≤ μ_{j,+}(B) + μ_{k,+}(S) for each requested (j, k)
/// (all with j + k − 1 ≤ dim when `pairs` is empty), and
/// μ_{j+K,+}(B+S) ≤ μ_{j,+}(B) for all j with K the number of positive
/// eigenvalues of S. Tolerance 1e−10·scale with scale the largest |eigenvalue|.
KyFanReport kyfan_check(const num::SymMatrix& B, const num::SymMatrix& S,
                        const std::vector<std::pair<int, int>>& pairs = {});

/// min{β, γ(1+α)/(1+γ)}; γ absent means γ = ∞ (limit 1+α). Requires
/// β > α > 0 and γ > α; the result lies in (α, β].
Rational perturbation_exponent(const Rational& alpha, const Rational& beta, const std::optional<Rational>& gamma);
double perturbation_exponent(double alpha, double beta, double gamma);

struct ThetaExponents {
  Rational theta_N;                     // 2mN/(2mN + n − 1)
  std::optional<Rational> legacy_theta;  // max{1/2, 2m/(2m − n + 1)} when 2m > n − 1
};
ThetaExponents theta_exponents(int m, int n, int N);

/// Maxima of v over dyadic blocks [2^k, 2^{k+1}) of the 1-based index.
std::vector<double> dyadic_block_maxima(std::span<const double> v);

struct ShiftData {
  double b = 0.0;
  std::vector<double> input;
  std::vector<double> mapped;  // b x/(b − x)
};

/// Throws std::invalid_argument if b is within 1e−9 (relative to max(1,|b|))
/// of a value, or b = 0.
ShiftData spectral_shift(std::span<const double> values, double b);
/// The inverse map y ↦ b y/(b + y), i.e. the shift with −b.
std::vector<double> inverse_shift(const ShiftData& data);

struct RemainderFit {
  std::optional<num::FitResult> fit;
  bool bounded = false;  // remainder ≤ 1 on the whole window
  double max_remainder = 0.0;
  std::vector<double> t, remainder;
  /// Dyadic-in-t block maxima of remainder / t^{(n−1)/2m}.
  std::vector<double> block_maxima;
  bool o_bound_holds = false;  // top three block maxima nonincreasing or within a factor 2
};

/// |N_{+,r}(t) − c_A t^{n/2m}| at `samples` log-spaced t in [t_lo, t_hi],
/// fitted as log(remainder + 1) against log t. Requires t_hi below the
/// largest value, t_lo > 0 and samples ≥ 10.
RemainderFit remainder_fit(const EigenSequence& seq, double c_A, int n, int m, double r, double t_lo, double t_hi,
                           int samples = 64);

}  // namespace kreinlab::spectral
