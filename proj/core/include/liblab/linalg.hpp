#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "liblab/tolerances.hpp"

namespace liblab {

using cplx = std::complex<double>;

/// Dense n-by-n complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of dimension n.
  explicit ComplexMatrix(std::size_t n);
  /// Throws ShapeError unless entries.size() == n*n.
  ComplexMatrix(std::size_t n, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n); }
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::span<const cplx> d);

  std::size_t n() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const cplx> entries() const { return a_; }
  std::span<cplx> entries() { return a_; }

  /// True when every imaginary part is exactly zero.
  bool is_real() const;
  bool is_hermitian(double tol = kTolerances.hermitian_entrywise) const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
/// Matrix product; uses a real GEMM when both factors are real.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// (tr A A*)^{1/2}
double hs_norm(const ComplexMatrix& a);
/// Largest singular value by power iteration on A*A.
double operator_norm(const ComplexMatrix& a);
/// Hilbert-Schmidt norm of U U* - I.
double unitarity_defect(const ComplexMatrix& u);

struct MatrixNorms {
  double operator_norm = 0.0;
  double hs_norm = 0.0;
  cplx trace{};
};

MatrixNorms norms(const ComplexMatrix& a);

/// A matrix validated as Hermitian on construction.
class HermitianMatrix {
 public:
  /// Throws ValidationError when |A(i,j) - conj A(j,i)| exceeds tol * max(1, max|A|).
  explicit HermitianMatrix(ComplexMatrix a, double tol = kTolerances.hermitian_entrywise);
  const ComplexMatrix& matrix() const { return a_; }
  std::size_t n() const { return a_.n(); }

 private:
  ComplexMatrix a_;
};

/// Sorted real eigenvalues.
class SpectralSample {
 public:
  SpectralSample() = default;
  explicit SpectralSample(std::vector<double> eigenvalues);
  std::span<const double> eigenvalues() const { return ev_; }
  std::size_t size() const { return ev_.size(); }

 private:
  std::vector<double> ev_;
};

SpectralSample hermitian_eigenvalues(const HermitianMatrix& a);
/// Validates `a` first; throws ValidationError if it is not Hermitian.
SpectralSample hermitian_eigenvalues(const ComplexMatrix& a);

struct EigenSystem {
  SpectralSample values;
  ComplexMatrix vectors;  // column k is the eigenvector for values[k]
};

EigenSystem hermitian_eigensystem(const HermitianMatrix& a);
/// ||A - Q diag(L) Q*||_HS
double reconstruction_residual(const HermitianMatrix& a, const EigenSystem& es);

/// Count of eigenvalues with |lambda| > rel_tol * max|lambda|.
std::size_t numerical_rank(const HermitianMatrix& a, double rel_tol = kTolerances.rank_threshold);

/// Fraction of eigenvalues <= x.
double edf_eval(const SpectralSample& s, double x);

/// k-fold Kronecker power of [[1,1],[1,-1]]. Throws CapacityError for k > 14.
ComplexMatrix sylvester_hadamard(unsigned k);
/// Unitary DFT: (1/sqrt n) exp(-2 pi i jk / n), 0-based.
ComplexMatrix dft_matrix(std::size_t n);
/// True when |H(i,j)| = 1 and H H* = n I within tolerance.
bool is_complex_hadamard(const ComplexMatrix& h, double tol = kTolerances.hadamard_modulus);

/// Unnormalized Walsh-Hadamard transform: returns sylvester_hadamard(k) * v. Throws ShapeError
/// unless v.size() is a power of two.
std::vector<cplx> fwht_apply(std::span<const cplx> v);
void fwht_inplace(std::span<cplx> v);
/// Unitary DFT of v by radix-2 FFT; throws ShapeError unless the size is a power of two.
std::vector<cplx> fft_apply(std::span<const cplx> v);
/// Unitary DFT of v: FFT for powers of two, dense product otherwise.
std::vector<cplx> dft_apply(std::span<const cplx> v);
/// Dense matrix-vector product.
std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> v);

bool is_power_of_two(std::size_t n);

}  // namespace liblab
