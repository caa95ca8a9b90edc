#pragma once

namespace liblab {

/// Every numerical threshold used by the library, in one place.
struct Tolerances {
  /// |A(i,j) - conj(A(j,i))| allowed when tagging a matrix Hermitian.
  double hermitian_entrywise = 1e-12;
  /// Hilbert-Schmidt norm of U U* - I allowed for "unitary" checks.
  double unitary = 1e-10;
  /// ||H(i,j)| - 1| allowed for complex Hadamard entries.
  double hadamard_modulus = 1e-12;
  /// |tr A| <= trace_zero * n * max(1, max|A(i,j)|) counts as trace zero.
  double trace_zero = 1e-12;
  /// Eigen-reconstruction residual relative to ||A||.
  double eigen_reconstruction = 1e-8;
  /// Hankel positive-semidefiniteness slack for moment sequences.
  double hankel_psd = 1e-9;
  /// Eigenvalues below this count toward the atom at 0 (and above 1 - this toward 1).
  double atom_threshold = 1e-8;
  /// Singular values above rank_threshold * ||D|| count toward the numerical rank of D.
  double rank_threshold = 1e-8;
  /// Eigenvalue perturbation allowed when comparing two empirical distribution functions.
  double edf_eigen_slack = 1e-8;
  /// Exact group identities (twist, recursion) must agree to this, relative to max(1, |value|).
  double exact_identity = 1e-12;
  /// Pass/fail for Monte Carlo estimates: |estimate - target| <= max(abs_tol, z * se).
  double z_score = 4.0;
  /// Trend tests ("no growth") use a z of 3.
  double trend_z = 3.0;
  /// Quadrature target accuracy for compression-law moments.
  double quadrature = 1e-12;
};

inline constexpr Tolerances kTolerances{};

}  // namespace liblab
