#pragma once

#include <cstddef>
#include <vector>

#include "qclock/complex_matrix.hpp"
#include "qclock/density_matrix.hpp"

namespace qclock {

/// Master-equation generator: Hamiltonian H (rad/s) plus up to d^2-1
/// jump operators L_alpha (units (rad/s)^(1/2)).
class LindbladGenerator {
 public:
  LindbladGenerator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> jumps);

  std::size_t dim() const { return hamiltonian_.dim(); }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<ComplexMatrix>& jumps() const { return jumps_; }

 private:
  ComplexMatrix hamiltonian_;
  std::vector<ComplexMatrix> jumps_;
};

/// Stable-state data: level energies E_m (rad/s) and joint jump
/// eigenvalues l_{alpha m} ((rad/s)^(1/2)). Equivalent to a generator
/// with diagonal H and diagonal jumps.
class StableBasisModel {
 public:
  StableBasisModel(std::vector<double> energies,
                   std::vector<std::vector<Complex>> jump_eigenvalues);

  std::size_t dim() const { return energies_.size(); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<std::vector<Complex>>& jump_eigenvalues() const {
    return jump_eigenvalues_;
  }
  std::size_t jump_count() const { return jump_eigenvalues_.size(); }

  /// The equivalent diagonal LindbladGenerator.
  LindbladGenerator to_generator() const;

 private:
  std::vector<double> energies_;
  std::vector<std::vector<Complex>> jump_eigenvalues_;  // [alpha][m]
};

/// Complex decay rates lambda_mn (rad/s) for coherences between stable
/// states: lambda_mn = sum_alpha [ |l_am|^2/2 + |l_an|^2/2 - l_am l_an^* ].
/// Re lambda damps, Im lambda shifts frequency; lambda_mm = 0.
class CoherenceDecayMatrix {
 public:
  explicit CoherenceDecayMatrix(ComplexMatrix lambda);
  const ComplexMatrix& lambda() const { return lambda_; }
  std::size_t dim() const { return lambda_.dim(); }

 private:
  ComplexMatrix lambda_;
};

/// d^2 x d^2 matrix S with vec(rho') = S vec(rho) under column stacking.
ComplexMatrix liouvillian_superoperator(const LindbladGenerator& gen);

/// Same construction with the dissipator negated. Not a physical
/// generator; provided as a counterexample fixture for the complete
/// positivity checks.
ComplexMatrix negated_dissipator_superoperator(const LindbladGenerator& gen);

/// Right-hand side of the master equation evaluated directly from the
/// operators (no vectorization).
ComplexMatrix lindblad_rhs(const LindbladGenerator& gen,
                           const ComplexMatrix& rho);

/// exp(S t) applied to rho, revalidated as a density matrix. Throws
/// std::runtime_error when positivity fails beyond tolerance (invalid
/// generator or state).
DensityMatrix propagate_superoperator(const ComplexMatrix& superop,
                                      const DensityMatrix& rho0, double t);

/// rho(t) = unvec(exp(L t) vec(rho0)) for the generator's Liouvillian.
DensityMatrix propagate(const LindbladGenerator& gen, const DensityMatrix& rho0,
                        double t);

/// Classical fixed-step RK4 integration of the master equation;
/// independent cross-check for propagate().
DensityMatrix propagate_rk4(const LindbladGenerator& gen,
                            const DensityMatrix& rho0, double t, int steps);

/// lambda_mn for all stable-state pairs. Both algebraic forms of the
/// rate are evaluated and cross-checked to 1e-12.
CoherenceDecayMatrix coherence_decay_matrix(const StableBasisModel& model);

/// rho_mn(t) = rho_mn(0) exp[-i(E_m - E_n) t - lambda_mn t].
DensityMatrix analytic_propagate(const StableBasisModel& model,
                                 const DensityMatrix& rho0, double t);

struct EntropyConditionResult {
  bool holds = false;
  /// ||sum_alpha (L^H L - L L^H)||_max
  double residual = 0.0;
};

/// Checks sum_alpha (L_a^H L_a - L_a L_a^H) = 0, the necessary and
/// sufficient condition for non-decreasing von Neumann entropy.
EntropyConditionResult entropy_condition_check(const LindbladGenerator& gen);

struct StabilityReport {
  bool stable = false;
  std::vector<double> jump_commutator_norms;          // ||[L_a, P_m]||_max
  std::vector<double> jump_adjoint_commutator_norms;  // ||[L_a^H, P_m]||_max
  double hamiltonian_commutator_norm = 0.0;           // ||[H, P_m]||_max
  /// Trace decomposition of the stationarity identity:
  /// 0 = Tr{sum [L,P]^H [L,P]} + Tr{P sum (L^H L - L L^H)}.
  double commutator_trace_term = 0.0;
  double entropy_condition_trace_term = 0.0;
  /// ||generator RHS applied to P_m||_max.
  double rhs_norm = 0.0;
  /// Populated only when stable.
  std::vector<Complex> jump_eigenvalues;
  double energy = 0.0;
};

/// Certifies whether basis state m is stable (all commutators with the
/// projector P_m = |m><m| vanish to 1e-10) and extracts the eigenvalues
/// (l_{alpha m}, E_m) when it is.
StabilityReport stability_check(const LindbladGenerator& gen, std::size_t m);

struct ChoiCheckResult {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Builds the Choi matrix of exp(S t) from its action on matrix units
/// and checks positive semidefiniteness (min eigenvalue >= -1e-8).
ChoiCheckResult choi_psd_check_superoperator(const ComplexMatrix& superop,
                                             std::size_t dim, double t);
ChoiCheckResult choi_psd_check(const LindbladGenerator& gen, double t);

}  // namespace qclock
