#include "qclock/density_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qclock/linalg.hpp"

namespace qclock {

DensityMatrix::DensityMatrix(const ComplexMatrix& rho) : rho_(rho.dim()) {
  const std::size_t n = rho.dim();
  if (n == 0) throw std::invalid_argument("DensityMatrix: empty matrix");
  if (!rho.all_finite())
    throw std::invalid_argument("DensityMatrix: non-finite entries");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rho_(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));

  const double tr = rho_.trace().real();
  if (std::abs(tr) < 1e-300)
    throw std::invalid_argument("DensityMatrix: trace is zero");
  rho_ *= Complex(1.0 / tr, 0.0);

  const EigResult eig = hermitian_eigendecomposition(rho_);
  if (eig.eigenvalues.front() < -1e-10) {
    throw std::runtime_error(
        "DensityMatrix: not positive semidefinite, min eigenvalue " +
        std::to_string(eig.eigenvalues.front()));
  }
}

DensityMatrix DensityMatrix::pure_state(std::size_t dim, std::size_t index) {
  if (index >= dim)
    throw std::invalid_argument("pure_state: index out of range");
  ComplexMatrix m(dim);
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / double(dim);
  return DensityMatrix(m);
}

double DensityMatrix::purity() const {
  return (rho_ * rho_).trace().real();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const EigResult eig = hermitian_eigendecomposition(rho.matrix());
  double s = 0.0;
  for (double p : eig.eigenvalues) {
    if (p < -1e-10)
      throw std::invalid_argument(
          "von_neumann_entropy: negative eigenvalue " + std::to_string(p));
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

}  // namespace qclock
