#pragma once

#include "qclock/complex_matrix.hpp"

namespace qclock {

/// Hermitian, unit-trace, positive-semidefinite state.
///
/// Construction re-symmetrizes via (rho + rho^H)/2 and renormalizes the
/// trace, which absorbs integrator drift; positivity is then validated
/// (smallest eigenvalue >= -1e-10). Immutable after construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& rho);

  static DensityMatrix pure_state(std::size_t dim, std::size_t index);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& matrix() const { return rho_; }
  std::size_t dim() const { return rho_.dim(); }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return rho_(r, c);
  }

  /// Tr(rho^2); 1 for pure states.
  double purity() const;

 private:
  ComplexMatrix rho_;
};

/// -Tr(rho ln rho) in nats, with 0 ln 0 = 0.
/// Throws std::invalid_argument if an eigenvalue is below -1e-10.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace qclock
