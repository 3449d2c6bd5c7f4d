#include "kreinlab/numkernel/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace kreinlab::num {

double brent_root(const ScalarFn& f, double a, double b, double fa, double fb, double rel_tol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw std::invalid_argument("brent_root: root not bracketed");
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = 1e-14 * std::max(std::abs(a), std::abs(b));
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * std::max(rel_tol * std::abs(b), floor);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  return b;
}

namespace {

bool opposite(double u, double v) { return (u < 0.0 && v > 0.0) || (u > 0.0 && v < 0.0); }

}  // namespace

namespace {

// Locates a root with the cheap function, then brackets it tightly with f.
// Returns nothing when the coarse estimate is off and the full bracket must
// be used.
std::optional<double> refine_from_coarse(const ScalarFn& f, const ScalarFn& coarse, double a, double b, double ca,
                                         double cb, double rel_tol) {
  const double rc = brent_root(coarse, a, b, ca, cb, rel_tol);
  const double delta = tol::coarse_root_window * std::max(std::abs(rc), b - a);
  const double lo = std::max(a, rc - delta);
  const double hi = std::min(b, rc + delta);
  if (!(lo < hi)) return std::nullopt;
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!opposite(flo, fhi)) return std::nullopt;
  return brent_root(f, lo, hi, flo, fhi, rel_tol);
}

}  // namespace

std::vector<double> find_roots_on_grid(const ScalarFn& f, std::span<const double> grid, const RootScanOptions& opt) {
  const std::size_t n = grid.size();
  std::vector<double> roots;
  if (n < 2) return roots;
  const ScalarFn& scan = opt.coarse ? opt.coarse : f;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = scan(grid[i]);

  // Accurate values at grid points, filled lazily.
  std::vector<double> fine(n, std::numeric_limits<double>::quiet_NaN());
  auto fine_at = [&](std::size_t i) {
    if (std::isnan(fine[i])) fine[i] = opt.coarse ? f(grid[i]) : g[i];
    return fine[i];
  };

  std::size_t i = 0;
  while (i + 1 < n) {
    if (g[i] == 0.0) {
      roots.push_back(grid[i]);
      ++i;
      continue;
    }
    if (!opposite(g[i], g[i + 1])) {
      ++i;
      continue;
    }
    if (opt.coarse) {
      if (const auto r = refine_from_coarse(f, scan, grid[i], grid[i + 1], g[i], g[i + 1], opt.rel_tol)) {
        roots.push_back(*r);
        ++i;
        continue;
      }
    }
    std::size_t lo = i;
    std::size_t hi = i + 1;
    double flo = fine_at(lo);
    double fhi = fine_at(hi);
    // Coarse and accurate signs may disagree near a root; widen the bracket.
    while (!opposite(flo, fhi) && flo != 0.0 && fhi != 0.0) {
      bool moved = false;
      if (lo > 0) {
        --lo;
        flo = fine_at(lo);
        moved = true;
      }
      if (opposite(flo, fhi)) break;
      if (hi + 1 < n) {
        ++hi;
        fhi = fine_at(hi);
        moved = true;
      }
      if (!moved) break;
    }
    if (flo == 0.0) {
      roots.push_back(grid[lo]);
    } else if (fhi == 0.0) {
      roots.push_back(grid[hi]);
    } else if (opposite(flo, fhi)) {
      roots.push_back(brent_root(f, grid[lo], grid[hi], flo, fhi, opt.rel_tol));
    }
    i = std::max(hi, i + 1);
  }
  if (g[n - 1] == 0.0) roots.push_back(grid[n - 1]);

  if (opt.detect_tangential) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double a = g[k - 1];
      const double b = g[k];
      const double c = g[k + 1];
      if (opposite(a, b) || opposite(b, c) || b == 0.0) continue;
      if (!(std::abs(b) < std::abs(a) && std::abs(b) < std::abs(c))) continue;
      const double xl = grid[k - 1];
      const double xr = grid[k + 1];
      const double h = 1e-7 * (xr - xl);
      const ScalarFn slope = [&](double x) { return f(x + h) - f(x - h); };
      const double sl = slope(xl + 2.0 * h);
      const double sr = slope(xr - 2.0 * h);
      if (!opposite(sl, sr)) continue;
      const double xm = brent_root(slope, xl + 2.0 * h, xr - 2.0 * h, sl, sr, opt.rel_tol);
      const double fm = f(xm);
      const double fl = fine_at(k - 1);
      const double fr = fine_at(k + 1);
      if (opposite(fm, fl) && opposite(fm, fr)) {
        roots.push_back(brent_root(f, xl, xm, fl, fm, opt.rel_tol));
        roots.push_back(brent_root(f, xm, xr, fm, fr, opt.rel_tol));
      } else if (std::abs(fm) <= opt.tangential_ratio * std::max(std::abs(fl), std::abs(fr))) {
        roots.push_back(xm);
        roots.push_back(xm);
      }
    }
    std::sort(roots.begin(), roots.end());
  }
  return roots;
}

std::vector<double> find_roots_bracketed(const ScalarFn& f, double lo, double hi, int scan_points,
                                         const RootScanOptions& opt) {
  if (scan_points < 2) throw std::invalid_argument("find_roots_bracketed: scan_points must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("find_roots_bracketed: empty interval");
  std::vector<double> grid(static_cast<std::size_t>(scan_points));
  for (int i = 0; i < scan_points; ++i) grid[i] = lo + (hi - lo) * i / (scan_points - 1);
  grid.back() = hi;
  return find_roots_on_grid(f, grid, opt);
}

}  // namespace kreinlab::num
