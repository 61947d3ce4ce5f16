#pragma once

#include <vector>

#include "qclock/complex_matrix.hpp"

namespace qclock {

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, columns match eigenvalues
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Sweeps stop once the off-diagonal Frobenius norm drops
/// below 1e-14 * ||m||_F. Throws std::invalid_argument, naming the
/// maximum asymmetry, when the input is not Hermitian.
EigResult hermitian_eigendecomposition(const ComplexMatrix& m);

/// exp(m) by scaling-and-squaring with a Pade(13,13) core.
/// Throws std::invalid_argument on non-finite entries.
ComplexMatrix matrix_exponential(const ComplexMatrix& m);

/// Solve a*x = b by Gaussian elimination with partial pivoting.
ComplexMatrix solve_linear(ComplexMatrix a, ComplexMatrix b);

}  // namespace qclock
