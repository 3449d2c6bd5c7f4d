#pragma once

#include <functional>

#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::num {

struct QuadratureOptions {
  double rel_tol = tol::quad_rel;
  /// Absolute floor relative to ∫|f| so that integrals that cancel to zero
  /// still terminate.
  double abs_floor = 1e-15;
  int initial_panels = 4;
  int max_panels = tol::quad_max_panels;
};

/// Composite 8-point Gauss–Legendre on [a, b], panel count doubled until the
/// change drops below rel_tol. Throws ConvergenceError past max_panels.
double quadrature(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt = {});

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1], n ∈ {4, 8}.
void gauss_legendre(int n, const double*& nodes, const double*& weights);

}  // namespace kreinlab::num
