#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qclock {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major, value semantics.
/// Sized for small fixed dimensions (d <= ~16, superoperators up to 256).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  /// Diagonal matrix from a list of complex entries.
  static ComplexMatrix diagonal(const std::vector<Complex>& d);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return a_.size(); }

  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return a_[r * dim_ + c];
  }
  const std::vector<Complex>& entries() const { return a_; }
  std::vector<Complex>& entries() { return a_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
  }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) {
    a *= s;
    return a;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) {
    a *= s;
    return a;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  Complex trace() const;

  /// max_ij |a_ij|
  double max_norm() const;
  double frobenius_norm() const;
  /// Maximum absolute column sum (the matrix 1-norm).
  double one_norm() const;
  /// max_ij |a_ij - conj(a_ji)|
  double hermiticity_defect() const;

  bool all_finite() const;

  /// c = a*b into preallocated c (aliasing with a or b is not allowed).
  static void multiply_into(const ComplexMatrix& a, const ComplexMatrix& b,
                            ComplexMatrix& c);
  /// this += s*o
  void add_scaled(const ComplexMatrix& o, Complex s);
  void set_zero();

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> a_;
};

inline ComplexMatrix commutator(const ComplexMatrix& a,
                                const ComplexMatrix& b) {
  return a * b - b * a;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a,
                                    const ComplexMatrix& b) {
  return a * b + b * a;
}

/// Kronecker product; row (i*dim_b + j) of the result pairs row i of a
/// with row j of b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization: vec(X)[i + j*d] = X(i, j).
std::vector<Complex> vec_columns(const ComplexMatrix& m);
ComplexMatrix unvec_columns(const std::vector<Complex>& v, std::size_t dim);

}  // namespace qclock
