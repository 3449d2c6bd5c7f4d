#include "kreinlab/spectral/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "kreinlab/numkernel/eigen.hpp"
#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/quadrature.hpp"
#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::spectral {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
  return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = checked_mul(num, -1);
    den = checked_mul(den, -1);
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  return {checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g)),
          checked_mul(a.den_ / g, b.den_)};
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(checked_mul(b.num_, -1), b.den_); }

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t s1 = g1 == 0 ? 1 : g1;
  const std::int64_t s2 = g2 == 0 ? 1 : g2;
  return {checked_mul(a.num_ / s1, b.num_ / s2), checked_mul(a.den_ / s2, b.den_ / s1)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return checked_mul(a.num_, b.den_) <=> checked_mul(b.num_, a.den_);
}

EigenSequence EigenSequence::ascending(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("EigenSequence: non-finite value");
  std::sort(values.begin(), values.end());
  return {std::move(values), Order::ascending};
}

EigenSequence EigenSequence::descending_positive(std::vector<double> values) {
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("EigenSequence: values must be positive");
  std::sort(values.begin(), values.end(), std::greater<>());
  return {std::move(values), Order::descending_positive};
}

EigenSequence EigenSequence::positive_part(std::span<const double> values) {
  std::vector<double> v;
  for (double x : values)
    if (x > 0.0) v.push_back(x);
  return descending_positive(std::move(v));
}

double EigenSequence::operator[](std::size_t j) const {
  if (j == 0) throw std::out_of_range("EigenSequence: indices are 1-based");
  if (j > values_.size()) {
    if (order_ == Order::descending_positive) return 0.0;
    throw std::out_of_range("EigenSequence: index past the end");
  }
  return values_[j - 1];
}

AsymptoticModel AsymptoticModel::make(double C, double alpha, double beta) {
  if (!(C > 0.0) || !(alpha > 0.0) || !(beta > alpha))
    throw std::invalid_argument("AsymptoticModel: need C > 0 and beta > alpha > 0");
  AsymptoticModel m;
  m.C = C;
  m.alpha = alpha;
  m.beta = beta;
  return m;
}

AsymptoticModel AsymptoticModel::from_operator(int n, int m, int N, double c_A, double beta) {
  if (n < 1 || m < 1 || N < 1) throw std::invalid_argument("AsymptoticModel: n, m, N must be >= 1");
  if (!(c_A > 0.0)) throw std::invalid_argument("AsymptoticModel: c_A must be positive");
  const double alpha = 2.0 * m * N / n;
  AsymptoticModel am = make(std::pow(c_A, alpha), alpha, beta);
  am.n = n;
  am.m = m;
  am.N = N;
  am.c_A = c_A;
  return am;
}

double weyl_constant(int n, int m, double volume) {
  if (n < 1 || m < 1) throw std::invalid_argument("weyl_constant: n, m must be >= 1");
  if (!(volume > 0.0)) throw std::invalid_argument("weyl_constant: volume must be positive");
  const double ball = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
  return ball * volume / std::pow(2.0 * std::numbers::pi, n);
}

namespace {

constexpr int kWeylMaxPanels1 = 1 << 12;
constexpr int kWeylMaxPanels2 = 64;
constexpr int kWeylMaxPanels3 = 16;

// Measure of {ξ : a(x, ξ) < 1} = (1/n)∫_{S^{n−1}} a(x, ω)^{−n/2m} dω with
// `k` angular nodes per angle.
double sublevel_measure(int n, int m, const Symbol& a, std::span<const double> x, int k) {
  const double e = -static_cast<double>(n) / (2.0 * m);
  auto radial = [&](std::span<const double> w) {
    const double v = a(x, w);
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weyl_constant: symbol must be positive off ξ = 0");
    return std::pow(v, e);
  };
  if (n == 1) {
    const double p[1] = {1.0}, q[1] = {-1.0};
    return radial(p) + radial(q);
  }
  if (n == 2) {
    // Trapezoid in θ is spectrally accurate for the periodic integrand.
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      const double th = 2.0 * std::numbers::pi * i / k;
      const double w[2] = {std::cos(th), std::sin(th)};
      s += radial(w);
    }
    return 0.5 * s * 2.0 * std::numbers::pi / k;
  }
  const double *gx, *gw;
  num::gauss_legendre(8, gx, gw);
  double s = 0.0;
  const int panels = std::max(1, k / 8);
  for (int pnl = 0; pnl < panels; ++pnl)
    for (int g = 0; g < 8; ++g) {
      const double phi = std::numbers::pi * (pnl + 0.5 * (gx[g] + 1.0)) / panels;
      const double wphi = 0.5 * gw[g] * std::numbers::pi / panels;
      for (int i = 0; i < 2 * k; ++i) {
        const double th = std::numbers::pi * i / k;
        const double w[3] = {std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi)};
        s += wphi * std::sin(phi) * radial(w) * std::numbers::pi / k;
      }
    }
  return s / 3.0;
}

double box_integral(int n, int m, const Symbol& a, std::span<const double> lo, std::span<const double> hi,
                    int panels) {
  const double *gx, *gw;
  num::gauss_legendre(8, gx, gw);
  const int per_dim = 8 * panels;
  const int k = 16 * panels;
  std::vector<double> nodes(static_cast<std::size_t>(n) * per_dim), weights(nodes.size());
  for (int d = 0; d < n; ++d) {
    const double width = (hi[d] - lo[d]) / panels;
    for (int p = 0; p < panels; ++p)
      for (int g = 0; g < 8; ++g) {
        nodes[d * per_dim + p * 8 + g] = lo[d] + width * (p + 0.5 * (gx[g] + 1.0));
        weights[d * per_dim + p * 8 + g] = 0.5 * width * gw[g];
      }
  }
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      x[d] = nodes[d * per_dim + idx[d]];
      w *= weights[d * per_dim + idx[d]];
    }
    total += w * sublevel_measure(n, m, a, x, k);
    int d = 0;
    while (d < n && ++idx[d] == per_dim) idx[d++] = 0;
    if (d == n) break;
  }
  return total;
}

}  // namespace

WeylEstimate weyl_constant(int n, int m, const Symbol& symbol, std::span<const double> lo, std::span<const double> hi,
                           double rel_tol) {
  if (n < 1 || n > 3) throw std::invalid_argument("weyl_constant: phase-space quadrature supports n <= 3");
  if (m < 1) throw std::invalid_argument("weyl_constant: m must be >= 1");
  if (lo.size() != static_cast<std::size_t>(n) || hi.size() != lo.size())
    throw std::invalid_argument("weyl_constant: box dimension must equal n");
  for (int d = 0; d < n; ++d)
    if (!(hi[d] > lo[d])) throw std::invalid_argument("weyl_constant: empty box");
  const int budget = n == 1 ? kWeylMaxPanels1 : n == 2 ? kWeylMaxPanels2 : kWeylMaxPanels3;
  const double norm = std::pow(2.0 * std::numbers::pi, -n);
  double prev = norm * box_integral(n, m, symbol, lo, hi, 1);
  for (int panels = 2; panels <= budget; panels *= 2) {
    const double cur = norm * box_integral(n, m, symbol, lo, hi, panels);
    const double err = std::abs(cur - prev);
    if (err <= rel_tol * std::abs(cur)) return {cur, err};
    prev = cur;
  }
  throw ConvergenceError("weyl_constant: quadrature budget exceeded");
}

std::size_t counting_function(const EigenSequence& seq, double r, double t) {
  if (r > t) return 0;
  const auto& v = seq.values();
  if (seq.order() == Order::ascending) {
    return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), t) - std::lower_bound(v.begin(), v.end(), r));
  }
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [r, t](double x) { return x >= r && x <= t; }));
}

std::vector<double> dyadic_block_maxima(std::span<const double> v) {
  std::vector<double> out;
  for (std::size_t start = 1; start <= v.size(); start *= 2) {
    const std::size_t end = std::min(v.size(), 2 * start - 1);
    double m = 0.0;
    for (std::size_t j = start; j <= end; ++j) m = std::max(m, v[j - 1]);
    out.push_back(m);
  }
  return out;
}

namespace {

double last_block_ratio(const std::vector<double>& blocks) {
  if (blocks.size() < 2) return 0.0;
  const double a = blocks[blocks.size() - 2];
  const double b = blocks.back();
  if (b == 0.0) return 0.0;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return b / a;
}

}  // namespace

EquivalenceReport counting_eigen_equiv(const EigenSequence& seq, const AsymptoticModel& model) {
  if (seq.order() != Order::descending_positive)
    throw std::invalid_argument("counting_eigen_equiv: needs a descending-positive sequence");
  const auto& mu = seq.values();
  const std::size_t n = mu.size();
  EquivalenceReport rep;
  rep.counting_exponent = (1.0 + model.alpha - model.beta) / model.alpha;
  std::vector<double> e1(n), e2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i + 1);
    const double ref = model.C * std::pow(j, -model.alpha);
    double diff = std::abs(mu[i] - ref);
    if (diff <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(mu[i], ref)) diff = 0.0;  // roundoff
    e1[i] = diff * std::pow(j, model.beta);
  }
  // N(t) = #{μ ≥ 1/t} is constant on [1/μ_j, 1/μ_{j+1}); check both ends.
  auto scaled = [&](double count, double t) {
    return std::abs(count - std::pow(model.C * t, 1.0 / model.alpha)) / std::pow(t, rep.counting_exponent);
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t last = i;
    while (last + 1 < n && mu[last + 1] == mu[i]) ++last;
    const double count = static_cast<double>(last + 1);
    double m = scaled(count, 1.0 / mu[i]);
    if (last + 1 < n) m = std::max(m, scaled(count, 1.0 / mu[last + 1]));
    e2[i] = m;
  }
  for (double x : e1) rep.c1 = std::max(rep.c1, x);
  for (double x : e2) rep.c2 = std::max(rep.c2, x);
  // A trailing partial block would understate growth; use complete blocks only.
  std::size_t full = 1;
  while (2 * full + 1 <= n) full = 2 * full + 1;
  const auto head = [full](const std::vector<double>& v) { return std::span<const double>(v.data(), std::min(full, v.size())); };
  rep.ratio1 = last_block_ratio(dyadic_block_maxima(head(e1)));
  rep.ratio2 = last_block_ratio(dyadic_block_maxima(head(e2)));
  rep.eigen_side_holds = std::isfinite(rep.c1) && rep.ratio1 <= 2.0;
  rep.counting_side_holds = std::isfinite(rep.c2) && rep.ratio2 <= 2.0;
  rep.both_hold = rep.eigen_side_holds && rep.counting_side_holds;
  return rep;
}

ExponentPair equivalence_exponents(const Rational& M, const Rational& n, const Rational& theta) {
  if (M <= Rational(0) || n <= Rational(0)) throw std::invalid_argument("equivalence_exponents: M, n must be positive");
  return {(M + theta) / n, (n - theta) / M};
}

KyFanReport kyfan_check(const num::SymMatrix& B, const num::SymMatrix& S, const std::vector<std::pair<int, int>>& pairs) {
  if (B.dim() != S.dim()) throw std::invalid_argument("kyfan_check: dimension mismatch");
  const std::size_t d = B.dim();
  const auto eb = num::sym_eigenvalues(B);
  const auto es = num::sym_eigenvalues(S);
  const auto esum = num::sym_eigenvalues(B + S);
  const auto pb = EigenSequence::positive_part(eb);
  const auto ps = EigenSequence::positive_part(es);
  const auto psum = EigenSequence::positive_part(esum);
  KyFanReport rep;
  for (const auto* e : {&eb, &es, &esum})
    for (double x : *e) rep.scale = std::max(rep.scale, std::abs(x));
  const double scale = rep.scale > 0.0 ? rep.scale : 1.0;
  const double tol = 1e-10 * scale;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  auto check = [&](std::size_t j, std::size_t k) {
    const double margin = pb[j] + ps[k] - psum[j + k - 1];
    ++rep.checked;
    if (margin < -tol) ++rep.violations;
    rep.worst_margin = std::min(rep.worst_margin, margin / scale);
  };
  if (pairs.empty()) {
    for (std::size_t j = 1; j <= d; ++j)
      for (std::size_t k = 1; j + k - 1 <= d; ++k) check(j, k);
  } else {
    for (const auto& [j, k] : pairs) {
      if (j < 1 || k < 1) throw std::invalid_argument("kyfan_check: indices are 1-based");
      check(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    }
  }
  rep.positive_in_S = ps.size();
  for (std::size_t j = 1; j + rep.positive_in_S <= d; ++j) {
    ++rep.k_checked;
    if (psum[j + rep.positive_in_S] > pb[j] + tol) ++rep.k_violations;
  }
  if (rep.checked == 0) rep.worst_margin = 0.0;
  return rep;
}

Rational perturbation_exponent(const Rational& alpha, const Rational& beta, const std::optional<Rational>& gamma) {
  if (!(alpha > Rational(0)) || !(beta > alpha)) throw std::invalid_argument("perturbation_exponent: need beta > alpha > 0");
  if (gamma && !(*gamma > alpha)) throw std::invalid_argument("perturbation_exponent: need gamma > alpha");
  const Rational one(1);
  const Rational branch = gamma ? *gamma * (one + alpha) / (one + *gamma) : one + alpha;
  const Rational out = std::min(beta, branch);
  if (!(out > alpha) || out > beta) throw std::logic_error("perturbation_exponent: result outside (alpha, beta]");
  return out;
}

double perturbation_exponent(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0) || !(beta > alpha)) throw std::invalid_argument("perturbation_exponent: need beta > alpha > 0");
  if (!(gamma > alpha)) throw std::invalid_argument("perturbation_exponent: need gamma > alpha");
  const double branch = std::isinf(gamma) ? 1.0 + alpha : gamma * (1.0 + alpha) / (1.0 + gamma);
  return std::min(beta, branch);
}

ThetaExponents theta_exponents(int m, int n, int N) {
  if (m < 1 || n < 1 || N < 1) throw std::invalid_argument("theta_exponents: m, n, N must be >= 1");
  ThetaExponents out;
  out.theta_N = Rational(2 * m * N, 2 * m * N + n - 1);
  if (2 * m - n + 1 > 0) out.legacy_theta = std::max(Rational(1, 2), Rational(2 * m, 2 * m - n + 1));
  return out;
}

ShiftData spectral_shift(std::span<const double> values, double b) {
  if (b == 0.0 || !std::isfinite(b)) throw std::invalid_argument("spectral_shift: b must be finite and nonzero");
  ShiftData out;
  out.b = b;
  out.input.assign(values.begin(), values.end());
  out.mapped.reserve(values.size());
  const double guard = tol::shift_collision * std::max(1.0, std::abs(b));
  for (double x : values) {
    if (std::abs(b - x) <= guard) throw std::invalid_argument("spectral_shift: b is too close to a spectral value");
    out.mapped.push_back(b * x / (b - x));
  }
  return out;
}

std::vector<double> inverse_shift(const ShiftData& data) {
  std::vector<double> out;
  out.reserve(data.mapped.size());
  for (double y : data.mapped) out.push_back(data.b * y / (data.b + y));
  return out;
}

RemainderFit remainder_fit(const EigenSequence& seq, double c_A, int n, int m, double r, double t_lo, double t_hi,
                           int samples) {
  if (seq.order() != Order::ascending) throw std::invalid_argument("remainder_fit: needs an ascending sequence");
  if (samples < 10) throw std::invalid_argument("remainder_fit: need at least 10 samples");
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw std::invalid_argument("remainder_fit: need 0 < t_lo < t_hi");
  if (seq.size() == 0 || !(t_hi < seq.values().back()))
    throw std::invalid_argument("remainder_fit: window must lie below the largest eigenvalue");
  if (n < 1 || m < 1) throw std::invalid_argument("remainder_fit: n, m must be >= 1");
  RemainderFit out;
  const double power = static_cast<double>(n) / (2.0 * m);
  const double scale_power = static_cast<double>(n - 1) / (2.0 * m);
  std::vector<double> shifted;
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (samples - 1));
    const double rem = std::abs(static_cast<double>(counting_function(seq, r, t)) - c_A * std::pow(t, power));
    out.t.push_back(t);
    out.remainder.push_back(rem);
    shifted.push_back(rem + 1.0);
    out.max_remainder = std::max(out.max_remainder, rem);
  }
  out.bounded = out.max_remainder <= 1.0;
  out.fit = num::loglog_fit(out.t, shifted);
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    const auto block = static_cast<std::size_t>(std::floor(std::log2(out.t[i] / t_lo)));
    if (block >= out.block_maxima.size()) out.block_maxima.resize(block + 1, 0.0);
    out.block_maxima[block] = std::max(out.block_maxima[block], out.remainder[i] / std::pow(out.t[i], scale_power));
  }
  const std::size_t nb = out.block_maxima.size();
  const std::size_t first = nb >= 3 ? nb - 3 : 0;
  bool nonincreasing = true;
  double top = 0.0, bottom = std::numeric_limits<double>::infinity();
  for (std::size_t k = first; k < nb; ++k) {
    if (k > first && out.block_maxima[k] > out.block_maxima[k - 1]) nonincreasing = false;
    top = std::max(top, out.block_maxima[k]);
    bottom = std::min(bottom, out.block_maxima[k]);
  }
  out.o_bound_holds = nonincreasing || top <= 2.0 * std::max(bottom, 1.0);
  return out;
}

}  // namespace kreinlab::spectral
