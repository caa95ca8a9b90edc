#pragma once

#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "liblab/ensembles.hpp"
#include "liblab/linalg.hpp"
#include "liblab/partitions.hpp"
#include "liblab/rng.hpp"

namespace liblab {

/// Matrices A_1..A_ell of a common dimension, each with |tr A| <= 1e-12 n max(1, max|A|).
class TraceZeroMatrixSet {
 public:
  /// Throws ValidationError on a nonzero trace, ShapeError on mixed dimensions.
  explicit TraceZeroMatrixSet(std::vector<ComplexMatrix> matrices);
  std::size_t size() const { return a_.size(); }
  std::size_t n() const { return a_.empty() ? 0 : a_.front().n(); }
  const ComplexMatrix& operator[](std::size_t i) const { return a_[i]; }
  const std::vector<ComplexMatrix>& matrices() const { return a_; }

 private:
  std::vector<ComplexMatrix> a_;
};

bool is_trace_zero(const ComplexMatrix& a);

/// i.i.d. standard complex Gaussian entries, optionally Hermitized, minus (tr/n) I.
ComplexMatrix sample_trace_zero_matrix(std::size_t n, SeededRng& rng, bool hermitian = false);

struct VerificationReport {
  std::string name;
  std::size_t instances_checked = 0;
  double max_ratio = 0.0;
  double bound_used = 0.0;
  bool passed = true;
  nlohmann::json details = nlohmann::json::array();

  nlohmann::json to_json() const;
};

/// Every signed permutation of {0..n-1} (2^n n! elements). Throws CapacityError for n > 4.
std::vector<SignedPermutation> signed_permutation_group(std::size_t n);

/// Exact average over the signed permutation group of tr(prod_m V_m w A_m w* V_m*).
cplx brute_force_group_expectation(const std::vector<ComplexMatrix>& v_list, const TraceZeroMatrixSet& a);
/// Same average without the trace-zero precondition; used by identity checks on derived inputs.
cplx group_average_trace(const std::vector<ComplexMatrix>& v_list, const std::vector<ComplexMatrix>& a);

/// Exact twist identity at small n. The family is U_alpha(w) = V_alpha w with w uniform on the group.
/// Compares sum_k F(k) A(k), with F the group-averaged twisted table, against the direct trace average.
VerificationReport verify_twist_identity_exact(const std::vector<ComplexMatrix>& v_by_index,
                                               const std::vector<std::size_t>& pattern,
                                               const TraceZeroMatrixSet& a);

/// Group-averaged twisted table F(k) = avg_w prod_m V'_m(k[2m-1], k[2m]), indices mod 2 ell.
IndexTable twisted_table_exact(const std::vector<ComplexMatrix>& v_by_index, const std::vector<std::size_t>& pattern);

/// Monte Carlo twist identity: the contraction of an estimated F table and a direct estimate of
/// E tr(U_1 A_1 U_1* ...) use independent streams and must agree within 5 standard errors.
VerificationReport verify_twist_identity(const FamilySampler& sampler, const std::vector<std::size_t>& pattern,
                                         const TraceZeroMatrixSet& a, std::size_t trials, const SeededRng& rng);

/// Exact check of phi_{i_1..i_ell}(A) = phi_{i_1..i_{ell-1}}(A_ell A_1 - tr(A_ell A_1)/n I, A_2..)
///   + tr(A_ell A_1)/n phi_{i_2..i_{ell-1}}(A_2..A_{ell-1}), with phi the exact group average.
/// Requires ell >= 3 and pattern.front() == pattern.back().
VerificationReport verify_less_jarring_recursion(const std::vector<ComplexMatrix>& v_by_index,
                                                 const std::vector<std::size_t>& pattern,
                                                 const TraceZeroMatrixSet& a);

/// |sum_i F(i) A(i)| / (max|F| prod ||A_m||_2) against the trivial bound n^ell.
/// F must pass chichi_table_check; otherwise ValidationError.
VerificationReport verify_theorem_fake(const IndexTable& f, const TraceZeroMatrixSet& a);

enum class ChiChiTableKind {
  permutation_invariant,  // F(i) = g(Pi(i)) with g random on Part_chi(2 ell)
  clump_generic,          // F(i) = h(Pi(i), i on Clump) with h random, zero off Part_chi
};

/// Random chi-chi-class table on {0..n-1}^{2 ell} scaled so that max|F| = 1 (unless it vanishes).
IndexTable random_chichi_table(std::size_t n, std::size_t ell, SeededRng& rng,
                               ChiChiTableKind kind = ChiChiTableKind::permutation_invariant);

struct SweepOptions {
  std::vector<std::size_t> ns;
  std::size_t ell = 2;
  std::size_t instances = 100;
  /// Pass iff the pooled log-log slope is at most slope_band + z * se (and at least -slope_band - z*se
  /// when two_sided).
  double slope_band = 0.1;
  double z = 3.0;
  bool two_sided = true;
};

/// Theorem Fake ratio over an n-sweep with random permutation-invariant tables and aligned
/// Hermitian trace-zero inputs A_m = A.
VerificationReport theorem_fake_sweep(const SweepOptions& opts, const SeededRng& rng);

/// Distinct-summation check: |sum over distinct i outside J of f(i)| <= ell^{2 ell} sum_{chi,J} |f|,
/// plus agreement of the left side with its Mobius/sum-product expansion.
VerificationReport verify_distinct_summation(const std::vector<std::vector<cplx>>& f, const std::vector<std::size_t>& j);

/// sum over {i : Pi(i) in Part_chichi(2 ell)} of |A(i)| divided by prod ||A_m||_2.
VerificationReport verify_yin_analogue(const std::vector<ComplexMatrix>& a);
VerificationReport yin_analogue_sweep(const SweepOptions& opts, const SeededRng& rng);

struct WhittleEstimate {
  double p = 2;
  double ratio = 0.0;  // ||Q||_p / ||A||_2
  double se = 0.0;
};

/// Monte Carlo ||sum A(i,j)(phi_i phi_j - delta_ij)||_p / ||A||_2 with i.i.d. Fibonacci phi.
std::vector<WhittleEstimate> fibonacci_whittle_ratio(const ComplexMatrix& a, const std::vector<double>& p_values,
                                                     std::size_t trials, const SeededRng& rng);
/// Ratio for one fixed A; passes when every estimate is finite.
VerificationReport verify_fibonacci_whittle(const ComplexMatrix& a, const std::vector<double>& p_values,
                                            std::size_t trials, const SeededRng& rng);
/// Gaussian A over an n-sweep; passes when no p shows a growth trend.
VerificationReport fibonacci_whittle_sweep(const SweepOptions& opts, const std::vector<double>& p_values,
                                           std::size_t trials, const SeededRng& rng);

}  // namespace liblab
