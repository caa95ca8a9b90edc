#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liblab/linalg.hpp"
#include "liblab/rng.hpp"

namespace liblab {

/// Permutation sigma with signs eps; dense form W(i,j) = eps_i [i == sigma(j)]. Indices are 0-based.
class SignedPermutation {
 public:
  /// Throws ValidationError unless sigma is a bijection of {0..n-1} and every sign is +-1.
  SignedPermutation(std::vector<std::size_t> sigma, std::vector<int> eps);

  static SignedPermutation identity(std::size_t n);

  std::size_t n() const { return sigma_.size(); }
  const std::vector<std::size_t>& sigma() const { return sigma_; }
  const std::vector<int>& eps() const { return eps_; }

  ComplexMatrix dense() const;
  SignedPermutation inverse() const;
  /// Signed permutation of the product (*this) * other.
  SignedPermutation compose(const SignedPermutation& other) const;

  /// W A, by row gather.
  ComplexMatrix left_apply(const ComplexMatrix& a) const;
  /// A W, by column gather.
  ComplexMatrix right_apply(const ComplexMatrix& a) const;
  /// W* A W.
  ComplexMatrix conjugate(const ComplexMatrix& a) const;
  /// W A W*.
  ComplexMatrix conjugate_adjoint(const ComplexMatrix& a) const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<std::size_t> sigma_;
  std::vector<int> eps_;
  std::vector<std::size_t> inv_;
};

/// Uniform over all 2^n n! signed permutations: Fisher-Yates shuffle, then n fair signs.
SignedPermutation sample_signed_permutation(std::size_t n, SeededRng& rng);

class DiagonalSigns {
 public:
  /// Throws ValidationError unless every entry is +-1.
  explicit DiagonalSigns(std::vector<int> signs);
  std::size_t n() const { return signs_.size(); }
  const std::vector<int>& signs() const { return signs_; }
  ComplexMatrix dense() const;
  /// D A, by row scaling.
  ComplexMatrix left_apply(const ComplexMatrix& a) const;

 private:
  std::vector<int> signs_;
};

DiagonalSigns sample_diagonal_signs(std::size_t n, SeededRng& rng);

/// A complex Hadamard matrix, validated once on construction.
class HadamardMatrix {
 public:
  /// Throws ValidationError unless |H(i,j)| = 1 and H/sqrt(n) is unitary.
  explicit HadamardMatrix(ComplexMatrix h);
  const ComplexMatrix& matrix() const { return h_; }
  /// H / sqrt(n)
  const ComplexMatrix& normalized() const { return u_; }
  std::size_t n() const { return h_.n(); }

 private:
  ComplexMatrix h_;
  ComplexMatrix u_;
};

/// W* (H / sqrt N) W
ComplexMatrix fake_haar(const HadamardMatrix& h, const SignedPermutation& w);
/// Validates `h` first; throws ValidationError if it is not a complex Hadamard matrix.
ComplexMatrix fake_haar(const ComplexMatrix& h, const SignedPermutation& w);

/// Labeled collection of unitaries of a common dimension.
class LiberatingFamily {
 public:
  /// Throws ValidationError if any member is not unitary within tolerance or dimensions differ.
  LiberatingFamily(std::vector<std::string> labels, std::vector<ComplexMatrix> members);

  std::size_t n() const { return members_.empty() ? 0 : members_.front().n(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<ComplexMatrix>& members() const { return members_; }
  const ComplexMatrix& operator[](std::size_t i) const { return members_[i]; }

 private:
  friend LiberatingFamily assemble_liberating_family(const HadamardMatrix&, const SignedPermutation&,
                                                     const std::vector<DiagonalSigns>&);
  struct Trusted {};
  LiberatingFamily(Trusted, std::vector<std::string> labels, std::vector<ComplexMatrix> members);

  std::vector<std::string> labels_;
  std::vector<ComplexMatrix> members_;
};

/// Members {W, (H/sqrt N) W, D_1 (H/sqrt N) W, ..., D_m (H/sqrt N) W} from given draws.
LiberatingFamily assemble_liberating_family(const HadamardMatrix& h, const SignedPermutation& w,
                                            const std::vector<DiagonalSigns>& ds);
/// One shared W and `index_count` independent D_i.
LiberatingFamily liberating_family(const HadamardMatrix& h, std::size_t index_count, SeededRng& rng);

/// T with T(j,k) = eps1, T(k,j) = eps2 when j != k; a single sign flip at j when j == k.
struct SignedTransposition {
  std::size_t j = 0;
  std::size_t k = 0;
  int eps1 = 1;
  int eps2 = 1;

  ComplexMatrix dense(std::size_t n) const;
  SignedPermutation as_signed_permutation(std::size_t n) const;
};

SignedTransposition sample_signed_transposition_indices(std::size_t n, SeededRng& rng);
/// Dense form of a random signed transposition.
ComplexMatrix sample_signed_transposition(std::size_t n, SeededRng& rng);

/// Haar unitary by QR of a complex Gaussian matrix with the phase correction. Baseline only.
ComplexMatrix sample_haar_unitary(std::size_t n, SeededRng& rng);

using FamilySampler = std::function<LiberatingFamily(SeededRng&)>;

struct EntryMomentProbe {
  std::string name;  // "(a,b)" with 0-based indices, or "random"
  double value = 0.0;
  double se = 0.0;
};

struct EntryMomentResult {
  double value = 0.0;  // max over probes of sqrt(N) (E|U(a,b)|^ell)^{1/ell}
  double se = 0.0;
  std::vector<EntryMomentProbe> probes;
};

/// Monte Carlo estimate of the entry-moment statistic for U = U_i* U_j over a probe set:
/// (0,0), (0,N/2-1), (N/2-1,N/2-1), (N-1,N-1), plus 4 random positions per trial pooled as one probe.
/// ell must be one of 2, 4, 6, 8 and trials >= 100; i != j must both index the family.
EntryMomentResult entry_moment_statistic(const FamilySampler& sampler, std::size_t i, std::size_t j,
                                         int ell, std::size_t trials, const SeededRng& rng);

}  // namespace liblab
