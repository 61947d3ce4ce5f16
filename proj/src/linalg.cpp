#include "qclock/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qclock {

namespace {

double offdiag_frobenius(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigResult hermitian_eigendecomposition(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  const double scale = std::max(m.max_norm(), 1.0);
  const double defect = m.hermiticity_defect();
  if (defect > 1e-10 * scale) {
    throw std::invalid_argument(
        "hermitian_eigendecomposition: input not Hermitian, max asymmetry " +
        std::to_string(defect));
  }

  ComplexMatrix a = m;
  // Fold the (tiny) asymmetry away so the rotations see an exactly
  // Hermitian matrix.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Complex h = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = h;
      a(j, i) = std::conj(h);
    }
    a(i, i) = Complex(a(i, i).real(), 0.0);
  }

  ComplexMatrix v = ComplexMatrix::identity(n);
  const double fnorm = m.frobenius_norm();
  const double stop = 1e-14 * std::max(fnorm, 1e-300);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_frobenius(a) <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= stop / n) continue;
        const Complex phase = apq / r;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sp = s * phase;         // J(p,q)
        const Complex spc = s * std::conj(phase);

        // A <- J^H A J with J = I except J(p,p)=J(q,q)=c,
        // J(p,q)=s*phase, J(q,p)=-s*conj(phase).
        for (std::size_t k = 0; k < n; ++k) {  // columns: A <- A J
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - spc * akq;
          a(k, q) = sp * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // rows: A <- J^H A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sp * aqk;
          a(q, k) = spc * apk + c * aqk;
        }
        a(p, q) = Complex(0.0, 0.0);
        a(q, p) = Complex(0.0, 0.0);
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - spc * vkq;
          v(k, q) = sp * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    res.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i)
      res.eigenvectors(i, j) = v(i, order[j]);
  }
  return res;
}

ComplexMatrix solve_linear(ComplexMatrix a, ComplexMatrix b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) throw std::invalid_argument("solve_linear: dim mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0)
      throw std::runtime_error("solve_linear: singular matrix");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(col, k), a(piv, k));
        std::swap(b(col, k), b(piv, k));
      }
    }
    const Complex d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = a(r, col) / d;
      if (f == Complex(0.0, 0.0)) continue;
      a(r, col) = Complex(0.0, 0.0);
      for (std::size_t k = col + 1; k < n; ++k) a(r, k) -= f * a(col, k);
      for (std::size_t k = 0; k < n; ++k) b(r, k) -= f * b(col, k);
    }
  }
  // Back substitution.
  for (std::size_t col = n; col-- > 0;) {
    const Complex d = a(col, col);
    for (std::size_t k = 0; k < n; ++k) b(col, k) /= d;
    for (std::size_t r = 0; r < col; ++r) {
      const Complex f = a(r, col);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < n; ++k) b(r, k) -= f * b(col, k);
    }
  }
  return b;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& m) {
  if (!m.all_finite())
    throw std::invalid_argument("matrix_exponential: non-finite entries");
  const std::size_t n = m.dim();

  // Pade(13,13) coefficients, Higham-style scaling threshold.
  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  const double theta13 = 5.371920351148152;

  const double norm = m.one_norm();
  int squarings = 0;
  if (norm > theta13)
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));

  ComplexMatrix a = m;
  if (squarings > 0) a *= Complex(std::ldexp(1.0, -squarings), 0.0);

  const ComplexMatrix ident = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a2 * a4;

  ComplexMatrix w = b[13] * a6 + b[11] * a4 + b[9] * a2;
  w = a6 * w;
  w += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const ComplexMatrix u = a * w;

  ComplexMatrix z = b[12] * a6 + b[10] * a4 + b[8] * a2;
  z = a6 * z;
  ComplexMatrix v = z + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  ComplexMatrix num = v + u;
  ComplexMatrix den = v - u;
  ComplexMatrix r = solve_linear(std::move(den), std::move(num));

  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace qclock
