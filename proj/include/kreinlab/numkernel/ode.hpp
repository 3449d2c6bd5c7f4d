#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kreinlab/numkernel/errors.hpp"
#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::num {

/// Fixed-step solution of y′ = F(x, y). Samples share one scale factor:
/// the true state at grid[k] is states[k·dim .. k·dim+dim) · exp(log_scale).
/// Without renormalization log_scale stays 0.
struct OdeSolution {
  std::size_t dim = 0;
  std::vector<double> grid;
  std::vector<double> states;
  double log_scale = 0.0;
  int steps = 0;

  std::size_t size() const { return grid.size(); }
  std::span<const double> at(std::size_t k) const { return {states.data() + k * dim, dim}; }
  std::span<const double> back() const { return at(grid.size() - 1); }
};

/// Classical fourth-order Runge–Kutta with `steps` equal steps from x0 to x1
/// (x1 < x0 integrates backwards). `rhs(x, y, dy)` writes F(x, y) into dy.
/// With store_all only the endpoints are kept otherwise. With renormalize the
/// state is rescaled whenever its max-norm exceeds the rescale threshold,
/// which keeps exponentially growing solutions finite.
template <class Rhs>
OdeSolution integrate_rk4(Rhs&& rhs, std::span<const double> init, double x0, double x1, int steps,
                          bool store_all, bool renormalize = false) {
  if (steps < 1) throw std::invalid_argument("integrate_rk4: steps must be positive");
  const std::size_t d = init.size();
  OdeSolution sol;
  sol.dim = d;
  sol.steps = steps;
  const std::size_t samples = store_all ? static_cast<std::size_t>(steps) + 1 : 2;
  sol.grid.reserve(samples);
  sol.states.reserve(samples * d);

  std::vector<double> y(init.begin(), init.end());
  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  const double h = (x1 - x0) / steps;
  sol.grid.push_back(x0);
  sol.states.insert(sol.states.end(), y.begin(), y.end());

  for (int s = 0; s < steps; ++s) {
    const double x = x0 + s * h;
    rhs(x, std::span<const double>(y), std::span<double>(k1));
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(x + 0.5 * h, std::span<const double>(tmp), std::span<double>(k2));
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(x + 0.5 * h, std::span<const double>(tmp), std::span<double>(k3));
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
    const double xn = (s + 1 == steps) ? x1 : x + h;
    rhs(xn, std::span<const double>(tmp), std::span<double>(k4));
    for (std::size_t i = 0; i < d; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (renormalize) {
      double big = 0.0;
      for (double v : y) big = std::max(big, std::abs(v));
      if (big > tol::ode_rescale_threshold) {
        const double f = 1.0 / big;
        for (double& v : y) v *= f;
        for (double& v : sol.states) v *= f;
        sol.log_scale += std::log(big);
      }
    }
    if (store_all || s + 1 == steps) {
      sol.grid.push_back(xn);
      sol.states.insert(sol.states.end(), y.begin(), y.end());
    }
  }
  for (double v : y)
    if (!std::isfinite(v)) throw NumericError("integrate_rk4: non-finite state");
  return sol;
}

/// Step count for RK4 so that the accumulated relative error on a solution
/// with local growth/oscillation rate ω over length L is about `target`.
inline int rk4_steps(double omega, double length, double target, int min_steps = tol::ode_min_steps) {
  const double wl = std::max(omega * std::abs(length), 1e-3);
  const double n = wl * std::pow(wl / (120.0 * target), 0.25) + 8.0;
  const double capped = std::min(n, static_cast<double>(tol::ode_max_steps));
  return std::max(min_steps, static_cast<int>(std::ceil(capped)));
}

struct OdeOptions {
  double rel_tol = tol::ode_halving_rel;
  int initial_steps = tol::ode_min_steps;
  int max_steps = tol::ode_max_steps;
  bool store_all = true;
  bool renormalize = false;
};

/// Step-halving driver: doubles the step count until the endpoint state
/// changes by less than rel_tol (relative to its max-norm). Returns the finer
/// solution. Throws ConvergenceError when max_steps would be exceeded.
template <class Rhs>
OdeSolution solve_ode_ivp(Rhs&& rhs, std::span<const double> init, double x0, double x1,
                          const OdeOptions& opt = {}) {
  int n = std::max(1, opt.initial_steps);
  OdeSolution coarse = integrate_rk4(rhs, init, x0, x1, n, false, opt.renormalize);
  while (true) {
    if (2 * static_cast<long long>(n) > opt.max_steps)
      throw ConvergenceError("solve_ode_ivp: step budget of " + std::to_string(opt.max_steps) + " exceeded");
    n *= 2;
    OdeSolution fine = integrate_rk4(rhs, init, x0, x1, n, opt.store_all, opt.renormalize);
    const double rel = std::exp(coarse.log_scale - fine.log_scale);
    double diff = 0.0;
    double mag = 0.0;
    for (std::size_t i = 0; i < fine.dim; ++i) {
      const double a = fine.back()[i];
      diff = std::max(diff, std::abs(a - rel * coarse.back()[i]));
      mag = std::max(mag, std::abs(a));
    }
    if (diff <= opt.rel_tol * mag || (mag == 0.0 && diff == 0.0)) return fine;
    coarse = std::move(fine);
  }
}

}  // namespace kreinlab::num
