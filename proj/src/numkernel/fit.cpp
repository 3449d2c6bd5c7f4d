#include "kreinlab/numkernel/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kreinlab::num {

FitResult loglog_fit(std::span<const double> t, std::span<const double> y, double lo, double hi) {
  if (t.size() != y.size()) throw std::invalid_argument("loglog_fit: size mismatch");
  if (!(lo <= hi)) throw std::invalid_argument("loglog_fit: empty window");
  std::vector<double> lx, ly;
  double wlo = std::numeric_limits<double>::infinity();
  double whi = -wlo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= lo && t[i] <= hi)) continue;
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_fit: non-positive value in window");
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(y[i]));
    wlo = std::min(wlo, t[i]);
    whi = std::max(whi, t[i]);
  }
  const std::size_t n = lx.size();
  if (n < 3) throw std::invalid_argument("loglog_fit: fewer than 3 points in window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_fit: all abscissae coincide");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (r.intercept + r.slope * lx[i]);
    ss += e * e;
  }
  r.residual_rms = std::sqrt(ss / n);
  r.window_lo = wlo;
  r.window_hi = whi;
  r.points = n;
  return r;
}

}  // namespace kreinlab::num
