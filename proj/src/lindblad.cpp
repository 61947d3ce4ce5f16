#include "qclock/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qclock/linalg.hpp"

namespace qclock {

namespace {

constexpr Complex kImag(0.0, 1.0);

void check_dims(const ComplexMatrix& h, const std::vector<ComplexMatrix>& ls) {
  const std::size_t d = h.dim();
  if (d == 0) throw std::invalid_argument("generator: empty Hamiltonian");
  for (std::size_t a = 0; a < ls.size(); ++a) {
    if (ls[a].dim() != d)
      throw std::invalid_argument("generator: jump " + std::to_string(a) +
                                  " has dim " + std::to_string(ls[a].dim()) +
                                  ", expected " + std::to_string(d));
  }
  if (ls.size() > d * d - 1)
    throw std::invalid_argument("generator: more than d^2-1 jump operators");
}

}  // namespace

LindbladGenerator::LindbladGenerator(ComplexMatrix hamiltonian,
                                     std::vector<ComplexMatrix> jumps)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  check_dims(hamiltonian_, jumps_);
  const double defect = hamiltonian_.hermiticity_defect();
  if (defect > 1e-12 * std::max(1.0, hamiltonian_.max_norm()))
    throw std::invalid_argument(
        "generator: Hamiltonian not Hermitian, max asymmetry " +
        std::to_string(defect));
}

StableBasisModel::StableBasisModel(
    std::vector<double> energies,
    std::vector<std::vector<Complex>> jump_eigenvalues)
    : energies_(std::move(energies)),
      jump_eigenvalues_(std::move(jump_eigenvalues)) {
  const std::size_t d = energies_.size();
  if (d == 0) throw std::invalid_argument("model: no levels");
  if (jump_eigenvalues_.size() > d * d - 1)
    throw std::invalid_argument("model: more than d^2-1 jump channels");
  for (const auto& row : jump_eigenvalues_)
    if (row.size() != d)
      throw std::invalid_argument(
          "model: jump eigenvalue row length does not match level count");
}

LindbladGenerator StableBasisModel::to_generator() const {
  const std::size_t d = dim();
  ComplexMatrix h(d);
  for (std::size_t m = 0; m < d; ++m) h(m, m) = energies_[m];
  std::vector<ComplexMatrix> ls;
  ls.reserve(jump_eigenvalues_.size());
  for (const auto& row : jump_eigenvalues_)
    ls.push_back(ComplexMatrix::diagonal(row));
  return LindbladGenerator(std::move(h), std::move(ls));
}

CoherenceDecayMatrix::CoherenceDecayMatrix(ComplexMatrix lambda)
    : lambda_(std::move(lambda)) {
  const std::size_t d = lambda_.dim();
  double scale = std::max(1.0, lambda_.max_norm());
  for (std::size_t m = 0; m < d; ++m) {
    if (std::abs(lambda_(m, m)) > 1e-12 * scale)
      throw std::invalid_argument("lambda: nonzero diagonal entry");
    for (std::size_t n = 0; n < d; ++n) {
      if (lambda_(m, n).real() < -1e-12 * scale)
        throw std::invalid_argument("lambda: negative real part");
      const Complex sym = lambda_(m, n) - std::conj(lambda_(n, m));
      if (std::abs(sym) > 1e-12 * scale)
        throw std::invalid_argument(
            "lambda: Re must be symmetric and Im antisymmetric");
    }
  }
}

ComplexMatrix liouvillian_superoperator(const LindbladGenerator& gen) {
  const std::size_t d = gen.dim();
  const ComplexMatrix ident = ComplexMatrix::identity(d);
  const ComplexMatrix& h = gen.hamiltonian();

  // Column-stacking convention: vec(A X B) = (B^T kron A) vec(X), so
  //   -i[H, rho]      -> -i (I kron H - H^T kron I)
  //   L rho L^H       -> conj(L) kron L
  //   {L^H L, rho}/2  -> (I kron L^H L)/2 + ((L^H L)^T kron I)/2
  ComplexMatrix s = (-kImag) * (kron(ident, h) - kron(h.transpose(), ident));
  for (const ComplexMatrix& l : gen.jumps()) {
    const ComplexMatrix ldl = l.adjoint() * l;
    s += kron(l.conj(), l);
    s += Complex(-0.5, 0.0) * kron(ident, ldl);
    s += Complex(-0.5, 0.0) * kron(ldl.transpose(), ident);
  }
  return s;
}

ComplexMatrix negated_dissipator_superoperator(const LindbladGenerator& gen) {
  const LindbladGenerator unitary_only(gen.hamiltonian(), {});
  const ComplexMatrix full = liouvillian_superoperator(gen);
  const ComplexMatrix ham = liouvillian_superoperator(unitary_only);
  // H part + (-1) * dissipator.
  return ham + ham - full;
}

ComplexMatrix lindblad_rhs(const LindbladGenerator& gen,
                           const ComplexMatrix& rho) {
  ComplexMatrix r = (-kImag) * commutator(gen.hamiltonian(), rho);
  for (const ComplexMatrix& l : gen.jumps()) {
    const ComplexMatrix ld = l.adjoint();
    const ComplexMatrix ldl = ld * l;
    r += l * rho * ld;
    r.add_scaled(anticommutator(ldl, rho), Complex(-0.5, 0.0));
  }
  return r;
}

DensityMatrix propagate_superoperator(const ComplexMatrix& superop,
                                      const DensityMatrix& rho0, double t) {
  if (t < 0.0) throw std::invalid_argument("propagate: negative time");
  const std::size_t d = rho0.dim();
  if (superop.dim() != d * d)
    throw std::invalid_argument("propagate: superoperator dim mismatch");
  const ComplexMatrix u = matrix_exponential(Complex(t, 0.0) * superop);
  const std::vector<Complex> v0 = vec_columns(rho0.matrix());
  std::vector<Complex> v1(v0.size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < v0.size(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < v0.size(); ++j) acc += u(i, j) * v0[j];
    v1[i] = acc;
  }
  const ComplexMatrix out = unvec_columns(v1, d);
  const double tr_drift = std::abs(out.trace().real() - 1.0);
  if (tr_drift > 1e-10)
    throw std::runtime_error("propagate: trace drift " +
                             std::to_string(tr_drift));
  return DensityMatrix(out);
}

DensityMatrix propagate(const LindbladGenerator& gen, const DensityMatrix& rho0,
                        double t) {
  return propagate_superoperator(liouvillian_superoperator(gen), rho0, t);
}

DensityMatrix propagate_rk4(const LindbladGenerator& gen,
                            const DensityMatrix& rho0, double t, int steps) {
  if (t < 0.0) throw std::invalid_argument("propagate_rk4: negative time");
  if (steps < 1) throw std::invalid_argument("propagate_rk4: steps < 1");
  const double dt = t / steps;
  ComplexMatrix rho = rho0.matrix();
  for (int s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = lindblad_rhs(gen, rho);
    ComplexMatrix tmp = rho;
    tmp.add_scaled(k1, Complex(0.5 * dt, 0.0));
    const ComplexMatrix k2 = lindblad_rhs(gen, tmp);
    tmp = rho;
    tmp.add_scaled(k2, Complex(0.5 * dt, 0.0));
    const ComplexMatrix k3 = lindblad_rhs(gen, tmp);
    tmp = rho;
    tmp.add_scaled(k3, Complex(dt, 0.0));
    const ComplexMatrix k4 = lindblad_rhs(gen, tmp);
    rho.add_scaled(k1, Complex(dt / 6.0, 0.0));
    rho.add_scaled(k2, Complex(dt / 3.0, 0.0));
    rho.add_scaled(k3, Complex(dt / 3.0, 0.0));
    rho.add_scaled(k4, Complex(dt / 6.0, 0.0));
  }
  return DensityMatrix(rho);
}

CoherenceDecayMatrix coherence_decay_matrix(const StableBasisModel& model) {
  const std::size_t d = model.dim();
  ComplexMatrix lambda(d);
  double scale = 1.0;
  for (const auto& row : model.jump_eigenvalues())
    for (const Complex& l : row) scale = std::max(scale, std::norm(l));

  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) {
      Complex direct = 0.0;    // |l_m|^2/2 + |l_n|^2/2 - l_m l_n^*
      Complex split = 0.0;     // -i Im(l_m l_n^*) + |l_m - l_n|^2 / 2
      for (const auto& row : model.jump_eigenvalues()) {
        const Complex lm = row[m], ln = row[n];
        direct += 0.5 * std::norm(lm) + 0.5 * std::norm(ln) - lm * std::conj(ln);
        split += Complex(0.5 * std::norm(lm - ln),
                         -std::imag(lm * std::conj(ln)));
      }
      if (std::abs(direct - split) > 1e-12 * scale)
        throw std::runtime_error(
            "coherence_decay_matrix: the two algebraic forms disagree");
      lambda(m, n) = (m == n) ? Complex(0.0, 0.0) : direct;
    }
  }
  return CoherenceDecayMatrix(std::move(lambda));
}

DensityMatrix analytic_propagate(const StableBasisModel& model,
                                 const DensityMatrix& rho0, double t) {
  if (t < 0.0) throw std::invalid_argument("analytic_propagate: negative time");
  const std::size_t d = model.dim();
  if (rho0.dim() != d)
    throw std::invalid_argument("analytic_propagate: dim mismatch");
  const CoherenceDecayMatrix decay = coherence_decay_matrix(model);
  const auto& e = model.energies();
  ComplexMatrix out(d);
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) {
      if (m == n) {
        out(m, n) = rho0(m, n);
        continue;
      }
      const Complex exponent =
          -kImag * Complex((e[m] - e[n]) * t, 0.0) -
          decay.lambda()(m, n) * Complex(t, 0.0);
      out(m, n) = rho0(m, n) * std::exp(exponent);
    }
  }
  return DensityMatrix(out);
}

EntropyConditionResult entropy_condition_check(const LindbladGenerator& gen) {
  ComplexMatrix acc(gen.dim());
  for (const ComplexMatrix& l : gen.jumps()) {
    const ComplexMatrix ld = l.adjoint();
    acc += ld * l - l * ld;
  }
  EntropyConditionResult res;
  res.residual = acc.max_norm();
  res.holds = res.residual <= 1e-10;
  return res;
}

StabilityReport stability_check(const LindbladGenerator& gen, std::size_t m) {
  const std::size_t d = gen.dim();
  if (m >= d) throw std::invalid_argument("stability_check: index out of range");
  ComplexMatrix proj(d);
  proj(m, m) = 1.0;

  StabilityReport rep;
  const double tol = 1e-10;
  bool all_small = true;

  ComplexMatrix entropy_term(d);
  for (const ComplexMatrix& l : gen.jumps()) {
    const ComplexMatrix c = commutator(l, proj);
    const ComplexMatrix cd = commutator(l.adjoint(), proj);
    rep.jump_commutator_norms.push_back(c.max_norm());
    rep.jump_adjoint_commutator_norms.push_back(cd.max_norm());
    all_small = all_small && c.max_norm() <= tol && cd.max_norm() <= tol;
    rep.commutator_trace_term += (c.adjoint() * c).trace().real();
    const ComplexMatrix ld = l.adjoint();
    entropy_term += ld * l - l * ld;
  }
  rep.entropy_condition_trace_term = (proj * entropy_term).trace().real();
  rep.hamiltonian_commutator_norm = commutator(gen.hamiltonian(), proj).max_norm();
  all_small = all_small && rep.hamiltonian_commutator_norm <= tol;

  rep.rhs_norm = lindblad_rhs(gen, proj).max_norm();
  rep.stable = all_small;
  if (rep.stable) {
    for (const ComplexMatrix& l : gen.jumps())
      rep.jump_eigenvalues.push_back(l(m, m));
    rep.energy = gen.hamiltonian()(m, m).real();
  }
  return rep;
}

ChoiCheckResult choi_psd_check_superoperator(const ComplexMatrix& superop,
                                             std::size_t dim, double t) {
  if (t < 0.0) throw std::invalid_argument("choi_psd_check: negative time");
  const std::size_t d = dim;
  if (superop.dim() != d * d)
    throw std::invalid_argument("choi_psd_check: superoperator dim mismatch");
  const ComplexMatrix u = matrix_exponential(Complex(t, 0.0) * superop);

  // C[(i,k),(j,l)] = Phi(|i><j|)(k,l), assembled column by column from
  // the propagator applied to each vectorized matrix unit.
  ComplexMatrix choi(d * d);
  std::vector<Complex> vin(d * d), vout(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (auto& x : vin) x = Complex(0.0, 0.0);
      vin[i + j * d] = 1.0;  // vec(|i><j|), column stacking
      for (std::size_t r = 0; r < d * d; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < d * d; ++c) acc += u(r, c) * vin[c];
        vout[r] = acc;
      }
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          choi(i * d + k, j * d + l) = vout[k + l * d];
    }
  }

  // Hermitize before the eigensolve; the defect is itself roundoff-level
  // for any generator of Lindblad form.
  ComplexMatrix herm(d * d);
  for (std::size_t r = 0; r < d * d; ++r)
    for (std::size_t c = 0; c < d * d; ++c)
      herm(r, c) = 0.5 * (choi(r, c) + std::conj(choi(c, r)));

  const EigResult eig = hermitian_eigendecomposition(herm);
  ChoiCheckResult res;
  res.min_eigenvalue = eig.eigenvalues.front();
  res.max_eigenvalue = eig.eigenvalues.back();
  res.completely_positive = res.min_eigenvalue >= -1e-8;
  return res;
}

ChoiCheckResult choi_psd_check(const LindbladGenerator& gen, double t) {
  return choi_psd_check_superoperator(liouvillian_superoperator(gen), gen.dim(),
                                      t);
}

}  // namespace qclock
