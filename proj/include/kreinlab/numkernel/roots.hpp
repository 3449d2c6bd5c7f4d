#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::num {

using ScalarFn = std::function<double(double)>;

struct RootScanOptions {
  double rel_tol = tol::root_rel;
  /// Cheap approximation of f used only to locate sign changes on the scan
  /// grid. Brackets are re-checked with f and widened to neighbouring scan
  /// points if the signs disagree.
  ScalarFn coarse;
  /// Also look for roots where f touches zero without a sign change on the
  /// grid (double or very close pairs of roots). Off by default: such roots
  /// are otherwise missed.
  bool detect_tangential = false;
  double tangential_ratio = tol::tangential_ratio;
};

/// Brent's method on a bracket with f(a)·f(b) ≤ 0.
double brent_root(const ScalarFn& f, double a, double b, double fa, double fb, double rel_tol = tol::root_rel);

/// Roots of f on a strictly increasing scan grid, ascending. Every sign change
/// between consecutive grid points is refined to rel_tol. A tangential root is
/// reported twice (multiplicity two).
std::vector<double> find_roots_on_grid(const ScalarFn& f, std::span<const double> grid,
                                       const RootScanOptions& opt = {});

/// Uniform scan of [lo, hi] with scan_points ≥ 2 points.
std::vector<double> find_roots_bracketed(const ScalarFn& f, double lo, double hi, int scan_points,
                                         const RootScanOptions& opt = {});

}  // namespace kreinlab::num
