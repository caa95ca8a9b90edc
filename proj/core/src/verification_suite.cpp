#include <algorithm>
#include <array>
#include <cmath>

#include "liblab/experiments.hpp"
#include "liblab/partitions.hpp"

namespace liblab {

namespace {

Check mobius_check(bool corrupt) {
  MobiusFunction mu;
  if (corrupt) mu = [](const SetPartition& p) { return mobius_zero(p) + (p.block_count() == 2 ? 1 : 0); };
  auto detail = nlohmann::json::array();
  bool ok = true;
  for (std::size_t ell = 1; ell <= 7; ++ell) {
    MobiusCheck c = mobius_inversion_check(ell, mu);
    ok &= c.holds;
    nlohmann::json d{{"ell", ell}, {"partitions", c.partitions_checked}, {"holds", c.holds}};
    if (c.first_failure) d["first_failure"] = c.first_failure->rgs();
    detail.push_back(d);
  }
  return {"mobius_inversion", ok, detail};
}

Check fibonacci_moment_check() {
  const std::array<std::int64_t, 10> expected{0, 1, 1, 2, 3, 5, 8, 13, 21, 34};
  bool ok = true;
  auto got = nlohmann::json::array();
  for (unsigned k = 1; k <= 10; ++k) {
    got.push_back(fibonacci_moment(k));
    ok &= fibonacci_moment(k) == expected[k - 1];
  }
  return {"fibonacci_moments", ok, {{"moments", got}}};
}

Check part_count_check() {
  auto count = [](std::size_t len, bool chichi) {
    std::size_t c = 0;
    for (const auto& p : all_partitions(len)) c += chichi ? in_part_chichi(p) : in_part_chi(p);
    return c;
  };
  const std::size_t cc2 = count(2, true), cc4 = count(4, true), c4 = count(4, false);
  return {"part_chichi_counts", cc2 == 0 && cc4 == 3 && c4 == 4,
          {{"part_chichi_2", cc2}, {"part_chichi_4", cc4}, {"part_chi_4", c4}}};
}

Check fibonacci_weight_check() {
  std::size_t tuples = 0, failures = 0;
  for (std::size_t ell = 1; ell <= 3; ++ell)
    for_each_tuple(4, 2 * ell, [&](std::span<const std::size_t> t) {
      ++tuples;
      const std::int64_t w = fibonacci_weight(t);
      failures += in_part_chichi(partition_of_tuple(t)) ? w < 1 : w < 0;
    });
  return {"fibonacci_weight", failures == 0, {{"tuples", tuples}, {"failures", failures}}};
}

std::vector<ComplexMatrix> trace_zero_inputs(std::size_t n, std::size_t ell, SeededRng& g) {
  std::vector<ComplexMatrix> a;
  for (std::size_t m = 0; m < ell; ++m) a.push_back(sample_trace_zero_matrix(n, g));
  return a;
}

template <class Fn>
Check group_instances(const std::string& name, std::size_t instances, const SeededRng& root, Fn fn) {
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t n : {2, 3})
    for (std::size_t t = 0; t < instances; ++t) {
      SeededRng g = root.derive(mix64(n) ^ t);
      VerificationReport rep = fn(n, g);
      failures += !rep.passed;
      worst = std::max(worst, rep.max_ratio);
    }
  return {name, failures == 0, {{"instances", 2 * instances}, {"failures", failures}, {"max_ratio", worst}}};
}

}  // namespace

ExperimentReport run_verification_suite(const ExperimentConfig& config) {
  ExperimentReport r;
  r.config = config;
  const SeededRng root(config.seed);
  const std::size_t instances = std::max<std::size_t>(1, std::min<std::size_t>(config.trials, 100));

  r.checks.push_back(mobius_check(config.inject_fault));
  r.checks.push_back(fibonacci_moment_check());
  r.checks.push_back(part_count_check());
  r.checks.push_back(fibonacci_weight_check());

  {
    std::size_t failures = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < instances; ++t) {
      SeededRng g = root.derive(0x10000 + t);
      const std::size_t n = 2 + t % 2;
      std::vector<ComplexMatrix> v{sample_haar_unitary(n, g), sample_haar_unitary(n, g)};
      TraceZeroMatrixSet a(trace_zero_inputs(n, 2, g));
      const SignedPermutation w0 = sample_signed_permutation(n, g);
      std::vector<ComplexMatrix> wv;
      for (const auto& m : v) wv.push_back(w0.left_apply(m));
      const cplx x = brute_force_group_expectation(v, a), y = brute_force_group_expectation(wv, a);
      const double err = std::abs(x - y) / std::max(1.0, std::abs(x));
      worst = std::max(worst, err);
      failures += err > kTolerances.exact_identity;
    }
    r.checks.push_back({"group_invariance", failures == 0, {{"instances", instances}, {"max_relative_error", worst}}});
  }

  r.checks.push_back(group_instances("twist_identity", instances, root.derive(0x20000), [](std::size_t n, SeededRng& g) {
    const std::size_t ell = 2 + g.uniform_index(2);
    std::vector<ComplexMatrix> v;
    std::vector<std::size_t> pattern;
    for (std::size_t m = 0; m < ell; ++m) {
      v.push_back(sample_haar_unitary(n, g));
      pattern.push_back(m);
    }
    return verify_twist_identity_exact(v, pattern, TraceZeroMatrixSet(trace_zero_inputs(n, ell, g)));
  }));

  r.checks.push_back(
      group_instances("less_jarring_recursion", instances, root.derive(0x30000), [](std::size_t n, SeededRng& g) {
        std::vector<ComplexMatrix> v{sample_haar_unitary(n, g), sample_haar_unitary(n, g)};
        return verify_less_jarring_recursion(v, {0, 1, 0}, TraceZeroMatrixSet(trace_zero_inputs(n, 3, g)));
      }));

  SweepOptions opts;
  opts.ns = {4, 6, 8};
  opts.instances = instances;
  VerificationReport fake = theorem_fake_sweep(opts, root.derive(0x40000));
  r.checks.push_back({"theorem_fake_sweep", fake.passed, fake.to_json()});
  return r;
}

}  // namespace liblab
