#pragma once

#include <cstdint>
#include <random>

namespace liblab {

/// A reproducible random stream identified by (seed, stream_id).
///
/// Identical (seed, stream_id) pairs replay identical draws. Parallel trials
/// call derive(trial_index) so that each trial owns an independent stream and
/// results do not depend on scheduling.
class SeededRng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream keyed by `child`; the parent's state is not advanced.
  SeededRng derive(std::uint64_t child) const;

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);
  /// +1 or -1 with probability 1/2 each.
  int fair_sign();
  double uniform01();
  double standard_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to mix stream identifiers.
std::uint64_t mix64(std::uint64_t x);

}  // namespace liblab
