#pragma once

#include <cstddef>
#include <limits>
#include <span>

namespace kreinlab::num {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log t, log y) for the points with t in
/// [lo, hi]. Throws std::invalid_argument with fewer than 3 usable points or
/// a non-positive y inside the window.
FitResult loglog_fit(std::span<const double> t, std::span<const double> y,
                     double lo = 0.0, double hi = std::numeric_limits<double>::infinity());

}  // namespace kreinlab::num
