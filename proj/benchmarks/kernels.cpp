#include <benchmark/benchmark.h>

#include <vector>

#include "liblab/ensembles.hpp"
#include "liblab/experiments.hpp"
#include "liblab/free_calculus.hpp"
#include "liblab/linalg.hpp"
#include "liblab/partitions.hpp"
#include "liblab/rng.hpp"

using namespace liblab;

namespace {

std::vector<cplx> random_vector(std::size_t n) {
  SeededRng g(1);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(g.standard_normal(), g.standard_normal());
  return v;
}

void BM_Fwht(benchmark::State& state) {
  auto v = random_vector(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    fwht_inplace(v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fwht)->RangeMultiplier(4)->Range(64, 1 << 14)->Complexity(benchmark::oNLogN);

void BM_Fft(benchmark::State& state) {
  auto v = random_vector(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fft_apply(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 1 << 14)->Complexity(benchmark::oNLogN);

void BM_HermitianEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SeededRng g(2);
  ComplexMatrix u = fake_haar(make_hadamard(HadamardKind::dft, n), sample_signed_permutation(n, g));
  ComplexMatrix h = u + u.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(h));
}
BENCHMARK(BM_HermitianEigenvalues)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FakeHaar(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const HadamardMatrix h = make_hadamard(HadamardKind::sylvester, n);
  SeededRng g(3);
  for (auto _ : state) benchmark::DoNotOptimize(fake_haar(h, sample_signed_permutation(n, g)));
}
BENCHMARK(BM_FakeHaar)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_FreeAdditive(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        free_additive_moments(MomentSequence::bernoulli(0.3, k), MomentSequence::symmetric_bernoulli(k), k));
}
BENCHMARK(BM_FreeAdditive)->DenseRange(4, 10, 2);

void BM_FreeMultiplicative(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        free_multiplicative_moments(MomentSequence::bernoulli(0.3, k), MomentSequence::bernoulli(0.6, k), k));
}
BENCHMARK(BM_FreeMultiplicative)->DenseRange(4, 10, 2);

void BM_MobiusInversion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mobius_inversion_check(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_MobiusInversion)->DenseRange(4, 7);

}  // namespace
BENCHMARK_MAIN();
