#include "kreinlab/numkernel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kreinlab/numkernel/errors.hpp"

namespace kreinlab::num {

namespace {

constexpr double kNodes4[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
constexpr double kWeights4[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

constexpr double kNodes8[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kWeights8[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Sum {
  double value;
  double abs;
};

Sum composite(const std::function<double(double)>& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double s = 0.0;
  double sa = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * w;
    for (int i = 0; i < 8; ++i) {
      const double v = kWeights8[i] * f(mid + 0.5 * w * kNodes8[i]);
      s += v;
      sa += std::abs(v);
    }
  }
  return {0.5 * w * s, 0.5 * std::abs(w) * sa};
}

}  // namespace

void gauss_legendre(int n, const double*& nodes, const double*& weights) {
  if (n == 4) {
    nodes = kNodes4;
    weights = kWeights4;
  } else if (n == 8) {
    nodes = kNodes8;
    weights = kWeights8;
  } else {
    throw std::invalid_argument("gauss_legendre: supported orders are 4 and 8");
  }
}

double quadrature(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt) {
  if (a == b) return 0.0;
  int panels = std::max(1, opt.initial_panels);
  Sum prev = composite(f, a, b, panels);
  while (2 * panels <= opt.max_panels) {
    panels *= 2;
    const Sum next = composite(f, a, b, panels);
    const double change = std::abs(next.value - prev.value);
    if (change <= opt.rel_tol * std::abs(next.value) || change <= opt.abs_floor * next.abs) return next.value;
    prev = next;
  }
  throw ConvergenceError("quadrature: no convergence with " + std::to_string(opt.max_panels) + " panels");
}

}  // namespace kreinlab::num
