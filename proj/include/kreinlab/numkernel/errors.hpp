#pragma once

#include <stdexcept>
#include <string>

namespace kreinlab {

/// Base class for failures of a numerical procedure (as opposed to bad input,
/// which is reported with std::invalid_argument).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration or refinement loop ran out of its budget.
class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A linear solve hit a (numerically) singular system, e.g. a spectral
/// parameter sitting on a Dirichlet eigenvalue.
class SingularSolveError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace kreinlab
