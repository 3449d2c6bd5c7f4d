#pragma once

#include <functional>
#include <vector>

namespace kreinlab::num {

/// Function known at grid points, optionally with derivatives. With
/// derivatives the interpolant is piecewise cubic Hermite, otherwise
/// piecewise linear.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(std::vector<double> grid, std::vector<double> values, std::vector<double> derivs = {});

  /// Samples `f` (and `df` when given) on a uniform grid of `intervals` cells.
  static SampledFunction from_callback(const std::function<double(double)>& f, double lo, double hi, int intervals,
                                       const std::function<double(double)>& df = {});

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& derivs() const { return derivs_; }
  bool has_derivs() const { return !derivs_.empty(); }
  std::size_t size() const { return grid_.size(); }
  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }

  double operator()(double x) const;
  double derivative(double x) const;
  double sup_norm() const;

  /// a·f + b·g on a common grid.
  friend SampledFunction combine(double a, const SampledFunction& f, double b, const SampledFunction& g);

 private:
  std::size_t cell(double x) const;

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

SampledFunction combine(double a, const SampledFunction& f, double b, const SampledFunction& g);

/// L² inner product on the common interval. Same-grid Hermite pairs are
/// integrated cell by cell with a 4-point Gauss rule (exact for the cubic
/// interpolants); other pairs use adaptive quadrature of the interpolants.
double inner_product(const SampledFunction& f, const SampledFunction& g);
double inner_product(const SampledFunction& f, const std::function<double(double)>& g);

}  // namespace kreinlab::num
