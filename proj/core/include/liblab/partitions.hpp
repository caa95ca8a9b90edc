#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "liblab/linalg.hpp"
#include "liblab/rng.hpp"

namespace liblab {

/// Partition of {0..ell-1} stored as a restricted-growth string: rgs[x] is the index of x's block,
/// blocks numbered by first appearance.
class SetPartition {
 public:
  SetPartition() = default;
  /// Throws ValidationError unless `rgs` is a restricted-growth string.
  static SetPartition from_rgs(std::vector<std::uint8_t> rgs);
  /// Throws ValidationError unless the blocks are nonempty, disjoint and cover {0..ell-1}.
  static SetPartition from_blocks(std::size_t ell, const std::vector<std::vector<std::size_t>>& blocks);
  /// 0_ell: all singletons.
  static SetPartition finest(std::size_t ell);
  /// One block.
  static SetPartition coarsest(std::size_t ell);

  std::size_t ell() const { return rgs_.size(); }
  std::size_t block_count() const { return blocks_; }
  const std::vector<std::uint8_t>& rgs() const { return rgs_; }
  std::size_t block_of(std::size_t x) const { return rgs_[x]; }
  /// Blocks in order of first appearance, each ascending.
  std::vector<std::vector<std::size_t>> blocks() const;
  std::vector<std::size_t> block_sizes() const;

  friend bool operator==(const SetPartition& a, const SetPartition& b) { return a.rgs_ == b.rgs_; }
  friend std::strong_ordering operator<=>(const SetPartition& a, const SetPartition& b) {
    return a.rgs_ <=> b.rgs_;
  }

 private:
  std::vector<std::uint8_t> rgs_;
  std::size_t blocks_ = 0;
};

using IndexTuple = std::vector<std::size_t>;

/// Level sets of the tuple.
SetPartition partition_of_tuple(std::span<const std::size_t> t);
/// True iff every block of p lies inside a block of q. Throws ValidationError if ground sets differ.
bool refines(const SetPartition& p, const SetPartition& q);
/// Every partition of {0..ell-1} once, in lexicographic restricted-growth order. ell <= 10.
std::vector<SetPartition> all_partitions(std::size_t ell);

/// mu(0, P) = prod over blocks of (-1)^{|B|-1} (|B|-1)!
std::int64_t mobius_zero(const SetPartition& p);

struct MobiusCheck {
  bool holds = true;
  std::size_t partitions_checked = 0;
  std::optional<SetPartition> first_failure;
};

using MobiusFunction = std::function<std::int64_t(const SetPartition&)>;

/// Checks sum_{T <= P} mu(0,T) = [P == 0_ell] for every P. ell <= 8. `mu` defaults to mobius_zero.
MobiusCheck mobius_inversion_check(std::size_t ell, const MobiusFunction& mu = {});

/// No singleton blocks.
bool in_part_chi(const SetPartition& p);
/// No singleton blocks and no block equal to {2m, 2m+1}. Throws ValidationError on odd ground set.
bool in_part_chichi(const SetPartition& p);
/// True if `block` is exactly {2m, 2m+1} for some m.
bool is_forbidden_doubleton(std::span<const std::size_t> block);
/// Union of blocks that are not forbidden doubletons, ascending. Throws ValidationError on odd ground set.
std::vector<std::size_t> clump(const SetPartition& p);
/// Same generated partition and agreement on its clump. Throws ValidationError on odd or unequal lengths.
bool clump_equivalent(std::span<const std::size_t> s, std::span<const std::size_t> t);

/// Calls fn on every tuple in {0..n-1}^length, first coordinate most significant.
void for_each_tuple(std::size_t n, std::size_t length, const std::function<void(std::span<const std::size_t>)>& fn);

/// Dense complex table on {0..n-1}^length with n^length <= 1e7.
class IndexTable {
 public:
  static constexpr std::size_t kCapacity = 10'000'000;
  /// Throws CapacityError when n^length exceeds kCapacity.
  IndexTable(std::size_t n, std::size_t length);

  std::size_t n() const { return n_; }
  std::size_t length() const { return len_; }
  std::size_t size() const { return v_.size(); }
  std::size_t flat_index(std::span<const std::size_t> t) const;
  cplx& operator[](std::span<const std::size_t> t) { return v_[flat_index(t)]; }
  const cplx& operator[](std::span<const std::size_t> t) const { return v_[flat_index(t)]; }
  std::span<cplx> values() { return v_; }
  std::span<const cplx> values() const { return v_; }
  double max_abs() const;

 private:
  std::size_t n_;
  std::size_t len_;
  std::vector<cplx> v_;
};

struct ChiChiCheck {
  bool chi_class = true;          // vanishes unless the generated partition lacks singletons
  bool chichi_definition = true;  // spare equal pairs may be relabelled freely
  std::optional<bool> clump_constant;  // only evaluated when n >= 6 ell
  bool passed() const { return chi_class && chichi_definition && clump_constant.value_or(true); }
};

/// Checks a table on {0..n-1}^{2 ell}. Entries compare equal within tol * max(1, max|F|).
ChiChiCheck chichi_table_check(const IndexTable& f, double tol = 1e-12);

/// A Fibonacci variate: (1+sqrt5)/2 with probability (sqrt5-1)/(2 sqrt5), else (1-sqrt5)/2.
double sample_fibonacci(SeededRng& rng);
/// E phi^k: 1, 0, 1, 1, 2, 3, 5, ... Throws CapacityError for k > 40.
std::int64_t fibonacci_moment(unsigned k);
/// E prod_m (phi_{t[2m]} phi_{t[2m+1]} - delta) by inclusion-exclusion over the equal pairs.
/// Throws ValidationError on odd length, CapacityError above length 16.
std::int64_t fibonacci_weight(std::span<const std::size_t> t);

/// prod_{B in P} sum_{i not in excluded} prod_{b in B} f[b][i]
cplx block_product_sum(const std::vector<std::vector<cplx>>& f, const SetPartition& p,
                       const std::vector<bool>& excluded = {});

}  // namespace liblab
