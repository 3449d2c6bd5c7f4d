#include "kreinlab/numkernel/sampled_function.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "kreinlab/numkernel/quadrature.hpp"

namespace kreinlab::num {

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values, std::vector<double> derivs)
    : grid_(std::move(grid)), values_(std::move(values)), derivs_(std::move(derivs)) {
  if (grid_.size() < 2) throw std::invalid_argument("SampledFunction: need at least two grid points");
  if (values_.size() != grid_.size()) throw std::invalid_argument("SampledFunction: values/grid size mismatch");
  if (!derivs_.empty() && derivs_.size() != grid_.size())
    throw std::invalid_argument("SampledFunction: derivs/grid size mismatch");
  for (std::size_t i = 1; i < grid_.size(); ++i)
    if (!(grid_[i] > grid_[i - 1])) throw std::invalid_argument("SampledFunction: grid not strictly increasing");
}

SampledFunction SampledFunction::from_callback(const std::function<double(double)>& f, double lo, double hi,
                                               int intervals, const std::function<double(double)>& df) {
  if (intervals < 1) throw std::invalid_argument("SampledFunction::from_callback: intervals must be positive");
  std::vector<double> g(intervals + 1), v(intervals + 1), d;
  for (int i = 0; i <= intervals; ++i) {
    g[i] = i == intervals ? hi : lo + (hi - lo) * i / intervals;
    v[i] = f(g[i]);
  }
  if (df) {
    d.resize(intervals + 1);
    for (int i = 0; i <= intervals; ++i) d[i] = df(g[i]);
  }
  return SampledFunction(std::move(g), std::move(v), std::move(d));
}

std::size_t SampledFunction::cell(double x) const {
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t k = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  return std::min(k, grid_.size() - 2);
}

double SampledFunction::operator()(double x) const {
  const std::size_t k = cell(x);
  const double h = grid_[k + 1] - grid_[k];
  const double t = (x - grid_[k]) / h;
  if (derivs_.empty()) return (1.0 - t) * values_[k] + t * values_[k + 1];
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values_[k] + (t3 - 2 * t2 + t) * h * derivs_[k] + (-2 * t3 + 3 * t2) * values_[k + 1] +
         (t3 - t2) * h * derivs_[k + 1];
}

double SampledFunction::derivative(double x) const {
  const std::size_t k = cell(x);
  const double h = grid_[k + 1] - grid_[k];
  const double t = (x - grid_[k]) / h;
  if (derivs_.empty()) return (values_[k + 1] - values_[k]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * values_[k] + (3 * t2 - 4 * t + 1) * h * derivs_[k] + (-6 * t2 + 6 * t) * values_[k + 1] +
          (3 * t2 - 2 * t) * h * derivs_[k + 1]) /
         h;
}

double SampledFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SampledFunction combine(double a, const SampledFunction& f, double b, const SampledFunction& g) {
  if (f.grid_ != g.grid_) throw std::invalid_argument("combine: grids differ");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f.values_[i] + b * g.values_[i];
  std::vector<double> d;
  if (f.has_derivs() && g.has_derivs()) {
    d.resize(f.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a * f.derivs_[i] + b * g.derivs_[i];
  }
  return SampledFunction(f.grid_, std::move(v), std::move(d));
}

double inner_product(const SampledFunction& f, const SampledFunction& g) {
  const double lo = std::max(f.lo(), g.lo());
  const double hi = std::min(f.hi(), g.hi());
  if (!(hi > lo)) return 0.0;
  std::vector<double> breaks;
  if (f.grid() == g.grid()) {
    breaks = f.grid();
  } else {
    breaks.reserve(f.size() + g.size());
    std::merge(f.grid().begin(), f.grid().end(), g.grid().begin(), g.grid().end(), std::back_inserter(breaks));
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::erase_if(breaks, [&](double x) { return x < lo || x > hi; });
  }
  const double* nodes;
  const double* weights;
  gauss_legendre(4, nodes, weights);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    const double half = 0.5 * (breaks[k + 1] - breaks[k]);
    double cs = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double x = mid + half * nodes[i];
      cs += weights[i] * f(x) * g(x);
    }
    s += half * cs;
  }
  return s;
}

double inner_product(const SampledFunction& f, const std::function<double(double)>& g) {
  const double* nodes;
  const double* weights;
  gauss_legendre(8, nodes, weights);
  double s = 0.0;
  const auto& x = f.grid();
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double mid = 0.5 * (x[k] + x[k + 1]);
    const double half = 0.5 * (x[k + 1] - x[k]);
    double cs = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double t = mid + half * nodes[i];
      cs += weights[i] * f(t) * g(t);
    }
    s += half * cs;
  }
  return s;
}

}  // namespace kreinlab::num
