#include "qclock/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qclock {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (a_.size() != dim * dim) {
    throw std::invalid_argument("ComplexMatrix: entry count " +
                                std::to_string(a_.size()) +
                                " does not match dim^2 = " +
                                std::to_string(dim * dim));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("matrix dim mismatch in +");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("matrix dim mismatch in -");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& x : a_) x *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("matrix dim mismatch in *");
  ComplexMatrix c(a.dim_);
  ComplexMatrix::multiply_into(a, b, c);
  return c;
}

void ComplexMatrix::multiply_into(const ComplexMatrix& a,
                                  const ComplexMatrix& b, ComplexMatrix& c) {
  const std::size_t n = a.dim_;
  if (b.dim_ != n || c.dim_ != n)
    throw std::invalid_argument("matrix dim mismatch in multiply_into");
  c.set_zero();
  // ikj loop order keeps the inner loop contiguous over row-major storage.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a.a_[i * n + k];
      if (aik == Complex(0.0, 0.0)) continue;
      const Complex* brow = &b.a_[k * n];
      Complex* crow = &c.a_[i * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void ComplexMatrix::add_scaled(const ComplexMatrix& o, Complex s) {
  if (o.dim_ != dim_)
    throw std::invalid_argument("matrix dim mismatch in add_scaled");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += s * o.a_[i];
}

void ComplexMatrix::set_zero() {
  for (auto& x : a_) x = Complex(0.0, 0.0);
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
  return r;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_norm() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : a_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::one_norm() const {
  double best = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

double ComplexMatrix::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& x : a_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix r(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < da; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < db; ++j)
        for (std::size_t l = 0; l < db; ++l)
          r(i * db + j, k * db + l) = aik * b(j, l);
    }
  return r;
}

std::vector<Complex> vec_columns(const ComplexMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<Complex> v(d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) v[i + j * d] = m(i, j);
  return v;
}

ComplexMatrix unvec_columns(const std::vector<Complex>& v, std::size_t dim) {
  if (v.size() != dim * dim)
    throw std::invalid_argument("unvec_columns: size mismatch");
  ComplexMatrix m(dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = v[i + j * dim];
  return m;
}

}  // namespace qclock
