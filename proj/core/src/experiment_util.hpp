#pragma once

#include <vector>

#include "liblab/experiments.hpp"
#include "liblab/parallel.hpp"

namespace liblab::detail {

/// V B V*, one product when B is diagonal.
ComplexMatrix sandwich(const ComplexMatrix& v, const ComplexMatrix& b);
bool is_diagonal(const ComplexMatrix& a);
/// (A + A*)/2
ComplexMatrix hermitize(const ComplexMatrix& a);

/// Per-trial spectra of build(rng_t), with rng_t = SeededRng(seed).derive(t).
template <class Build>
std::vector<std::vector<double>> collect_spectra(const ExperimentConfig& c, Build build) {
  const SeededRng root(c.seed);
  return parallel_map(c.trials, [&](std::size_t t) {
    SeededRng r = root.derive(t);
    auto ev = hermitian_eigenvalues(hermitize(build(r)));
    return std::vector<double>(ev.eigenvalues().begin(), ev.eigenvalues().end());
  });
}

/// Fills moments/se/targets and one moment_k check per order from per-trial spectra.
void add_moment_checks(ExperimentReport& r, const std::vector<std::vector<double>>& spectra,
                       const MomentSequence& target, double abs_tol);

}  // namespace liblab::detail
