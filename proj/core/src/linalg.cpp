#include "liblab/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "liblab/errors.hpp"

namespace liblab {

namespace {

using RowMajorC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorC> view(const ComplexMatrix& a) {
  auto n = static_cast<Eigen::Index>(a.n());
  return Eigen::Map<const RowMajorC>(a.entries().data(), n, n);
}

RowMajorD real_part(const ComplexMatrix& a) {
  auto n = static_cast<Eigen::Index>(a.n());
  RowMajorD r(n, n);
  auto e = a.entries();
  for (Eigen::Index k = 0; k < n * n; ++k) r.data()[k] = e[static_cast<std::size_t>(k)].real();
  return r;
}

ComplexMatrix from_real(const RowMajorD& r) {
  auto n = static_cast<std::size_t>(r.rows());
  std::vector<cplx> v(n * n);
  for (std::size_t k = 0; k < n * n; ++k) v[k] = r.data()[k];
  return ComplexMatrix(n, std::move(v));
}

void require_same(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.n() != b.n())
    throw ShapeError(std::string(what) + ": dimension mismatch " + std::to_string(a.n()) + " vs " +
                     std::to_string(b.n()));
}

bool is_diagonal(const ComplexMatrix& a) {
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j && a(i, j) != cplx{}) return false;
  return true;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n)
    throw ShapeError("ComplexMatrix: expected " + std::to_string(n * n) + " entries, got " +
                     std::to_string(a_.size()));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool ComplexMatrix::is_real() const {
  return std::all_of(a_.begin(), a_.end(), [](const cplx& z) { return z.imag() == 0.0; });
}

bool ComplexMatrix::is_hermitian(double tol) const {
  const double scale = std::max(1.0, max_abs());
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol * scale) return false;
  return true;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : a_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same(*this, o, "operator+");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same(*this, o, "operator-");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same(a, b, "operator*");
  if (a.is_real() && b.is_real()) {
    RowMajorD p = real_part(a) * real_part(b);
    return from_real(p);
  }
  ComplexMatrix r(a.n());
  auto n = static_cast<Eigen::Index>(a.n());
  Eigen::Map<RowMajorC>(r.entries().data(), n, n).noalias() = view(a) * view(b);
  return r;
}

double hs_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double operator_norm(const ComplexMatrix& a) {
  const std::size_t n = a.n();
  if (n == 0) return 0.0;
  auto m = view(a);
  // Deterministic, generic start vector so repeated calls agree exactly.
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = cplx(1.0 + 0.1 * std::sin(1.0 + i), 0.05 * std::cos(3.0 * i));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    double next = std::sqrt(nw);
    v = w / nw;
    if (it > 5 && std::abs(next - sigma) <= 1e-14 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

double unitarity_defect(const ComplexMatrix& u) {
  auto n = static_cast<Eigen::Index>(u.n());
  RowMajorC d = view(u) * view(u).adjoint() - RowMajorC::Identity(n, n);
  return d.norm();
}

MatrixNorms norms(const ComplexMatrix& a) { return {operator_norm(a), hs_norm(a), a.trace()}; }

HermitianMatrix::HermitianMatrix(ComplexMatrix a, double tol) : a_(std::move(a)) {
  if (!a_.is_hermitian(tol)) throw ValidationError("matrix is not Hermitian within tolerance");
}

SpectralSample::SpectralSample(std::vector<double> eigenvalues) : ev_(std::move(eigenvalues)) {
  std::sort(ev_.begin(), ev_.end());
}

SpectralSample hermitian_eigenvalues(const HermitianMatrix& h) {
  const ComplexMatrix& a = h.matrix();
  const auto n = static_cast<Eigen::Index>(a.n());
  std::vector<double> ev(a.n());
  if (is_diagonal(a)) {
    for (std::size_t i = 0; i < a.n(); ++i) ev[i] = a(i, i).real();
  } else if (a.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_part(a), Eigen::EigenvaluesOnly);
    Eigen::VectorXd::Map(ev.data(), n) = es.eigenvalues();
  } else {
    Eigen::MatrixXcd m = view(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    Eigen::VectorXd::Map(ev.data(), n) = es.eigenvalues();
  }
  return SpectralSample(std::move(ev));
}

SpectralSample hermitian_eigenvalues(const ComplexMatrix& a) {
  return hermitian_eigenvalues(HermitianMatrix(a));
}

EigenSystem hermitian_eigensystem(const HermitianMatrix& h) {
  const ComplexMatrix& a = h.matrix();
  Eigen::MatrixXcd m = view(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const std::size_t n = a.n();
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  ComplexMatrix q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      q(i, j) = es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  // Eigen returns ascending eigenvalues, so the columns already match the sorted sample.
  return {SpectralSample(std::move(ev)), std::move(q)};
}

double reconstruction_residual(const HermitianMatrix& h, const EigenSystem& es) {
  auto q = view(es.vectors);
  auto l = es.values.eigenvalues();
  Eigen::VectorXd d = Eigen::VectorXd::Map(l.data(), static_cast<Eigen::Index>(l.size()));
  RowMajorC r = view(h.matrix()) - q * d.asDiagonal() * q.adjoint();
  return r.norm();
}

std::size_t numerical_rank(const HermitianMatrix& a, double rel_tol) {
  auto s = hermitian_eigenvalues(a);
  double top = 0.0;
  for (double x : s.eigenvalues()) top = std::max(top, std::abs(x));
  if (top == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(s.eigenvalues().begin(), s.eigenvalues().end(),
                                                [&](double x) { return std::abs(x) > rel_tol * top; }));
}

double edf_eval(const SpectralSample& s, double x) {
  auto ev = s.eigenvalues();
  if (ev.empty()) return 0.0;
  auto it = std::upper_bound(ev.begin(), ev.end(), x);
  return static_cast<double>(it - ev.begin()) / static_cast<double>(ev.size());
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> v) {
  if (v.size() != a.n()) throw ShapeError("matvec: vector length does not match matrix");
  std::vector<cplx> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < a.n(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

}  // namespace liblab
