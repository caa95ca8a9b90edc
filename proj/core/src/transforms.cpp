#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "liblab/errors.hpp"
#include "liblab/linalg.hpp"

namespace liblab {

namespace {

// roots[k] = exp(-2 pi i k / n); indexing by (j*k mod n) keeps every entry exact to one rounding.
std::vector<cplx> unit_roots(std::size_t n) {
  std::vector<cplx> r(n);
  for (std::size_t k = 0; k < n; ++k)
    r[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return r;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

ComplexMatrix sylvester_hadamard(unsigned k) {
  if (k > 14) throw CapacityError("sylvester_hadamard: k=" + std::to_string(k) + " exceeds 14");
  const std::size_t n = std::size_t{1} << k;
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = (std::popcount(i & j) & 1) ? -1.0 : 1.0;
  return h;
}

ComplexMatrix dft_matrix(std::size_t n) {
  if (n == 0) throw ValidationError("dft_matrix: n must be positive");
  auto roots = unit_roots(n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f(i, j) = s * roots[(i * j) % n];
  return f;
}

bool is_complex_hadamard(const ComplexMatrix& h, double tol) {
  const std::size_t n = h.n();
  if (n == 0) return false;
  for (const auto& z : h.entries())
    if (std::abs(std::abs(z) - 1.0) > tol) return false;
  ComplexMatrix u = h * cplx(1.0 / std::sqrt(static_cast<double>(n)));
  return unitarity_defect(u) <= kTolerances.unitary;
}

void fwht_inplace(std::span<cplx> v) {
  if (!is_power_of_two(v.size()))
    throw ShapeError("fwht: length " + std::to_string(v.size()) + " is not a power of two");
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j) {
        cplx a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
}

std::vector<cplx> fwht_apply(std::span<const cplx> v) {
  std::vector<cplx> out(v.begin(), v.end());
  fwht_inplace(out);
  return out;
}

std::vector<cplx> fft_apply(std::span<const cplx> v) {
  const std::size_t n = v.size();
  if (!is_power_of_two(n))
    throw ShapeError("fft: length " + std::to_string(n) + " is not a power of two");
  std::vector<cplx> a(v.begin(), v.end());
  const unsigned bits = static_cast<unsigned>(std::countr_zero(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (unsigned b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    if (i < r) std::swap(a[i], a[r]);
  }
  auto roots = unit_roots(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx t = roots[j * stride] * a[i + j + len / 2];
        a[i + j] = u + t;
        a[i + j + len / 2] = u - t;
      }
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : a) z *= s;
  return a;
}

std::vector<cplx> dft_apply(std::span<const cplx> v) {
  const std::size_t n = v.size();
  if (n == 0) throw ShapeError("dft_apply: empty vector");
  if (is_power_of_two(n)) return fft_apply(v);
  auto roots = unit_roots(n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) acc += roots[(i * j) % n] * v[j];
    out[i] = s * acc;
  }
  return out;
}

}  // namespace liblab
