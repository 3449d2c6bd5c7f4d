#pragma once

#include <vector>

#include "kreinlab/numkernel/matrix.hpp"
#include "kreinlab/numkernel/tolerances.hpp"

namespace kreinlab::num {

/// Eigenvalues ascending (with multiplicity); column k of `eigenvectors` is
/// the unit eigenvector for eigenvalues[k].
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

/// Full decomposition by cyclic Jacobi rotations with threshold sweeps.
/// Throws ConvergenceError after `max_sweeps` sweeps.
EigenDecomposition sym_eigen(const SymMatrix& a, int max_sweeps = tol::jacobi_max_sweeps);

/// Eigenvalues only, ascending: Householder tridiagonalization followed by
/// implicit QL. Used for the large grid matrices where no vectors are needed.
std::vector<double> sym_eigenvalues(const SymMatrix& a);

/// Eigenvalues ν of the pencil A c = ν M c, ascending. M must be symmetric
/// positive definite; otherwise SingularSolveError.
std::vector<double> gen_eigen(const SymMatrix& a, const SymMatrix& m);

/// Smallest pencil eigenvalue, +∞ for an empty (0×0) pencil.
double pencil_min(const SymMatrix& a, const SymMatrix& m);

}  // namespace kreinlab::num
