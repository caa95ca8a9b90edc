#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "liblab/errors.hpp"
#include "liblab/linalg.hpp"
#include "liblab/serialization.hpp"
#include "test_util.hpp"

using namespace liblab;
using testutil::max_diff;
using testutil::naive_mul;

namespace {

// Kronecker power built directly from the 2x2 seed.
ComplexMatrix kron_power(unsigned k) {
  ComplexMatrix h(1, {1.0});
  for (unsigned s = 0; s < k; ++s) {
    const std::size_t n = h.n();
    ComplexMatrix next(2 * n);
    const double seed[2][2] = {{1, 1}, {1, -1}};
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) next(a * n + i, b * n + j) = seed[a][b] * h(i, j);
    h = next;
  }
  return h;
}

}  // namespace

TEST(ComplexMatrixTest, ShapeChecked) {
  EXPECT_THROW(ComplexMatrix(2, {1.0, 2.0, 3.0}), ShapeError);
  ComplexMatrix a(2, {1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(a(1, 0), cplx(3.0));
  EXPECT_EQ(a.trace(), cplx(5.0));
}

TEST(ComplexMatrixTest, ProductMatchesTripleLoop) {
  std::mt19937_64 g(1);
  for (std::size_t n : {1u, 3u, 8u, 17u}) {
    auto a = testutil::random_matrix(n, g), b = testutil::random_matrix(n, g);
    EXPECT_LT(max_diff(a * b, naive_mul(a, b)), 1e-12 * n);
  }
  // Real path
  ComplexMatrix r(3, {1, 2, 3, 4, 5, 6, 7, 8, 9}), s = ComplexMatrix::identity(3) * cplx(2.0);
  EXPECT_LT(max_diff(r * s, naive_mul(r, s)), 1e-15);
}

TEST(ComplexMatrixTest, AdjointTraceArithmetic) {
  std::mt19937_64 g(2);
  auto a = testutil::random_matrix(5, g), b = testutil::random_matrix(5, g);
  EXPECT_EQ(a.adjoint(), testutil::naive_adjoint(a));
  EXPECT_LT(std::abs(a.trace() - testutil::naive_trace(a)), 1e-14);
  auto c = a + b - b;
  EXPECT_LT(max_diff(c, a), 1e-14);
  EXPECT_FALSE(a.is_hermitian());
  EXPECT_TRUE(testutil::random_hermitian(5, g).is_hermitian());
}

TEST(NormsTest, HilbertSchmidtIsEntrySum) {
  std::mt19937_64 g(3);
  auto a = testutil::random_matrix(7, g);
  double s = 0;
  for (auto z : a.entries()) s += std::norm(z);
  EXPECT_NEAR(hs_norm(a) * hs_norm(a), s, 1e-12 * s);
}

TEST(NormsTest, OperatorNormBounds) {
  std::mt19937_64 g(4);
  for (int rep = 0; rep < 5; ++rep) {
    auto a = testutil::random_matrix(9, g);
    MatrixNorms m = norms(a);
    EXPECT_GE(m.hs_norm * (1 + 1e-9), m.operator_norm);
    EXPECT_LE(m.hs_norm, std::sqrt(9.0) * m.operator_norm * (1 + 1e-9));
    // sigma_max^2 is the top eigenvalue of A*A
    const SpectralSample gram = hermitian_eigenvalues(a.adjoint() * a);
    auto ev = gram.eigenvalues();
    EXPECT_NEAR(m.operator_norm, std::sqrt(ev.back()), 1e-9 * m.operator_norm);
    double sum = 0;
    for (double x : ev) sum += x;
    EXPECT_NEAR(m.hs_norm * m.hs_norm, sum, 1e-9 * sum);
  }
  std::vector<double> d{3.0, -5.0, 1.0};
  EXPECT_NEAR(operator_norm(ComplexMatrix::diagonal(std::span<const double>(d))), 5.0, 1e-12);
  EXPECT_EQ(operator_norm(ComplexMatrix(3)), 0.0);
}

TEST(HadamardTest, SylvesterExamples) {
  EXPECT_EQ(sylvester_hadamard(0), ComplexMatrix(1, {1.0}));
  EXPECT_EQ(sylvester_hadamard(1), ComplexMatrix(2, {1.0, 1.0, 1.0, -1.0}));
  auto h4 = sylvester_hadamard(2);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(h4(0, j), cplx(1.0));
    EXPECT_EQ(h4(1, j), cplx(j % 2 ? -1.0 : 1.0));
  }
  EXPECT_THROW(sylvester_hadamard(15), CapacityError);
}

TEST(HadamardTest, SylvesterIsKroneckerPower) {
  for (unsigned k = 0; k <= 6; ++k) {
    auto h = sylvester_hadamard(k);
    EXPECT_EQ(h, kron_power(k));
    EXPECT_TRUE(is_complex_hadamard(h));
    auto hht = h * h.transpose();
    EXPECT_LT(max_diff(hht, ComplexMatrix::identity(h.n()) * cplx(static_cast<double>(h.n()))), 1e-12);
  }
}

TEST(HadamardTest, DftExamples) {
  EXPECT_LT(max_diff(dft_matrix(1), ComplexMatrix(1, {1.0})), 1e-15);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_LT(max_diff(dft_matrix(2), ComplexMatrix(2, {r, r, r, -r})), 1e-15);
  // 1-based entry (2,2) of the 4-point DFT
  EXPECT_LT(std::abs(dft_matrix(4)(1, 1) - cplx(0, -0.5)), 1e-15);
  for (std::size_t n : {3u, 5u, 12u, 64u, 100u}) {
    auto f = dft_matrix(n);
    EXPECT_LT(unitarity_defect(f), 1e-10);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_LT(std::abs(f(i, j) * std::sqrt(static_cast<double>(n)) -
                           std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(i * j % n) / n)),
                  1e-12);
    EXPECT_TRUE(is_complex_hadamard(f * cplx(std::sqrt(static_cast<double>(n)))));
  }
  EXPECT_FALSE(is_complex_hadamard(dft_matrix(8)));
  EXPECT_THROW(dft_matrix(0), ValidationError);
}

TEST(TransformTest, FwhtExamples) {
  std::vector<cplx> a{1.0, 0.0}, b{1.0, 1.0};
  EXPECT_EQ(fwht_apply(a), (std::vector<cplx>{1.0, 1.0}));
  EXPECT_EQ(fwht_apply(b), (std::vector<cplx>{2.0, 0.0}));
  std::vector<cplx> e(8, 0.0);
  e[0] = 1.0;
  EXPECT_EQ(fwht_apply(e), std::vector<cplx>(8, 1.0));
  std::vector<cplx> bad(6, 1.0);
  EXPECT_THROW(fwht_apply(bad), ShapeError);
}

TEST(TransformTest, FastTransformsMatchDenseProducts) {
  std::mt19937_64 g(5);
  std::normal_distribution<double> d;
  for (unsigned k = 0; k <= 10; ++k) {
    const std::size_t n = std::size_t{1} << k;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(d(g), d(g));
    auto dense = matvec(kron_power(k), v);
    auto fast = fwht_apply(v);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(dense[i] - fast[i]));
      scale = std::max(scale, std::abs(dense[i]));
    }
    EXPECT_LE(err, 1e-10 * scale);
    if (k <= 8) {
      auto fd = matvec(dft_matrix(n), v);
      auto ff = dft_apply(v);
      for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(fd[i] - ff[i]), 1e-10 * std::sqrt(n) * 4);
    }
  }
  std::vector<cplx> v{1.0, 2.0, cplx(0, 1)};
  auto fd = matvec(dft_matrix(3), v);
  auto ff = dft_apply(v);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(fd[i] - ff[i]), 1e-14);
  EXPECT_THROW(fft_apply(v), ShapeError);
}

TEST(EigenTest, Examples) {
  auto values = [](const ComplexMatrix& a) {
    const SpectralSample s = hermitian_eigenvalues(a);
    return std::vector<double>(s.eigenvalues().begin(), s.eigenvalues().end());
  };
  EXPECT_EQ(values(ComplexMatrix::identity(3)), (std::vector<double>{1, 1, 1}));
  std::vector<double> d{3, -1, 2};
  EXPECT_EQ(values(ComplexMatrix::diagonal(std::span<const double>(d))), (std::vector<double>{-1, 2, 3}));
  auto ev = values(ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}));
  EXPECT_NEAR(ev[0], -1.0, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);
  ev = values(ComplexMatrix(2, {0.0, cplx(0, -1), cplx(0, 1), 0.0}));
  EXPECT_NEAR(ev[0], -1.0, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);
  EXPECT_THROW(hermitian_eigenvalues(ComplexMatrix(2, {0.0, 1.0, 2.0, 0.0})), ValidationError);
}

TEST(EigenTest, ComplexHermitianReconstruction) {
  std::mt19937_64 g(6);
  for (std::size_t n : {2u, 6u, 30u}) {
    HermitianMatrix h(testutil::random_hermitian(n, g));
    EigenSystem es = hermitian_eigensystem(h);
    EXPECT_LE(reconstruction_residual(h, es), 1e-8 * hs_norm(h.matrix()));
    auto ev = es.values.eigenvalues();
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
    double sum = 0;
    for (double x : ev) sum += x;
    EXPECT_NEAR(sum, h.matrix().trace().real(), 1e-10 * n);
    // eigenvalue-only path agrees
    const SpectralSample only_s = hermitian_eigenvalues(h);
    auto only = only_s.eigenvalues();
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(only[i], ev[i], 1e-10);
  }
}

TEST(EigenTest, NumericalRank) {
  std::vector<double> d{0, 2, 0, -3};
  EXPECT_EQ(numerical_rank(HermitianMatrix(ComplexMatrix::diagonal(std::span<const double>(d)))), 2u);
  EXPECT_EQ(numerical_rank(HermitianMatrix(ComplexMatrix(3))), 0u);
}

TEST(EdfTest, Examples) {
  SpectralSample s({1.0, -1.0});
  EXPECT_EQ(s.eigenvalues()[0], -1.0);
  EXPECT_DOUBLE_EQ(edf_eval(s, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(edf_eval(s, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(edf_eval(SpectralSample({1, 1, 1}), 0.999), 0.0);
  // right-continuous
  EXPECT_DOUBLE_EQ(edf_eval(s, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(edf_eval(s, -1.0), 0.5);
}

TEST(EdfTest, MonotoneAndLimits) {
  std::mt19937_64 g(7);
  auto ev = hermitian_eigenvalues(testutil::random_hermitian(20, g));
  double prev = 0;
  for (double x = -20; x <= 20; x += 0.01) {
    double f = edf_eval(ev, x);
    EXPECT_GE(f, prev);
    prev = f;
  }
  EXPECT_EQ(edf_eval(ev, ev.eigenvalues().front() - 1e-9), 0.0);
  EXPECT_EQ(edf_eval(ev, ev.eigenvalues().back()), 1.0);
}

TEST(SerializationTest, RoundTrip) {
  std::mt19937_64 g(8);
  auto a = testutil::random_matrix(4, g);
  auto j = matrix_to_json(a);
  EXPECT_EQ(j["n"], 4);
  EXPECT_EQ(j["entries"].size(), 32u);
  EXPECT_EQ(matrix_from_json(j), a);
  j["entries"].erase(0);
  EXPECT_THROW(matrix_from_json(j), ShapeError);
}
