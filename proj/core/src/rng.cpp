#include "liblab/rng.hpp"

#include <array>

namespace liblab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

SeededRng SeededRng::derive(std::uint64_t child) const {
  return SeededRng(seed_, mix64(stream_id_ ^ mix64(child + 1)));
}

std::size_t SeededRng::uniform_index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

int SeededRng::fair_sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

double SeededRng::uniform01() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double SeededRng::standard_normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

}  // namespace liblab
