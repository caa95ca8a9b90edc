#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liblab/tolerances.hpp"

namespace liblab {

/// Moments m_1..m_K of a compactly supported law; m_0 = 1 implicitly.
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::vector<double> moments, std::optional<double> radius_hint = std::nullopt);

  static MomentSequence point_mass(double c, std::size_t order);
  /// Law of a variable taking +-1 with probability 1/2.
  static MomentSequence symmetric_bernoulli(std::size_t order);
  /// Law of a variable taking 1 with probability p and 0 otherwise.
  static MomentSequence bernoulli(double p, std::size_t order);

  std::size_t order() const { return m_.size(); }
  /// m_k; m_0 = 1. Throws ValidationError when k exceeds order().
  double operator[](std::size_t k) const;
  const std::vector<double>& moments() const { return m_; }
  std::optional<double> radius_hint() const { return radius_; }

  /// Hankel matrix [m_{i+j}] is positive semidefinite within tol.
  bool hankel_consistent(double tol = kTolerances.hankel_psd) const;
  /// Both [m_{i+j}] and [m_{i+j+1}] are positive semidefinite within tol (law on [0, inf)).
  bool supported_on_nonnegative(double tol = kTolerances.hankel_psd) const;

  friend bool operator==(const MomentSequence&, const MomentSequence&) = default;

 private:
  std::vector<double> m_;
  std::optional<double> radius_;
};

struct Letter {
  std::size_t label = 0;
  unsigned power = 1;
};

using AlternatingWord = std::vector<Letter>;

/// Longest word accepted by free_mixed_moment. Products (ab)^10 need 20 letters.
inline constexpr std::size_t kMaxWordLength = 20;

/// phi(word) for free variables with the given marginals (labels index `marginals`).
/// Adjacent letters with equal labels are allowed and merged. Throws ValidationError when a marginal
/// is not known to the order the word needs, CapacityError above kMaxWordLength letters.
double free_mixed_moment(const std::vector<MomentSequence>& marginals, const AlternatingWord& word);
/// Same, with one variable per position named by label.
double free_mixed_moment(const std::map<std::string, MomentSequence>& marginals,
                         const std::vector<std::string>& word);

/// k-th output is phi((a+b)^k), k = 1..K. K <= 12.
MomentSequence free_additive_moments(const MomentSequence& a, const MomentSequence& b, std::size_t k);
/// k-th output is phi((ab)^k), k = 1..K. K <= 10; `a` must be supported on [0, inf).
MomentSequence free_multiplicative_moments(const MomentSequence& a, const MomentSequence& b, std::size_t k);

struct CompressionLaw {
  double alpha = 0.5;
  double beta = 0.5;
  double atom0 = 0.5;
  double atom1 = 0.0;
  double lambda_minus = 0.0;
  double lambda_plus = 1.0;
};

/// Throws ValidationError unless alpha, beta lie in (0,1).
CompressionLaw compression_law(double alpha, double beta);
/// sqrt((l+ - x)(x - l-)) / (2 pi x (1-x)) on (l-, l+), zero elsewhere.
double compression_density(const CompressionLaw& law, double x);
/// Integral of the density over (l-, l+) by adaptive Gauss-Kronrod.
double compression_continuous_mass(const CompressionLaw& law);
/// atom0 + atom1 + continuous mass.
double compression_total_mass(const CompressionLaw& law);
/// m_k = atom1 + integral of x^k density, k = 1..K. K <= 10.
MomentSequence law_moments_by_quadrature(const CompressionLaw& law, std::size_t k);
/// Integral of the density over [lo, hi] intersected with the support.
double compression_interval_mass(const CompressionLaw& law, double lo, double hi);

}  // namespace liblab
