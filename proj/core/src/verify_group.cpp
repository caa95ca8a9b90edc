#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "liblab/errors.hpp"
#include "liblab/parallel.hpp"
#include "liblab/stats.hpp"
#include "liblab/verify.hpp"

namespace liblab {

namespace {

void check_pattern(const std::vector<ComplexMatrix>& v_by_index, const std::vector<std::size_t>& pattern,
                   std::size_t a_count, std::size_t n) {
  if (pattern.empty()) throw ValidationError("pattern must be nonempty");
  if (pattern.size() != a_count) throw ShapeError("pattern length differs from the number of matrices");
  for (std::size_t p : pattern)
    if (p >= v_by_index.size()) throw ValidationError("pattern index outside the family");
  for (const auto& v : v_by_index)
    if (v.n() != n) throw ShapeError("family member dimension differs from the matrices");
}

// prod_m V'_m(k[(2m-1) mod 2l], k[2m]) * A_m(k[2m], k[2m+1]) summed over k, for fixed V'.
cplx twisted_contraction(const std::vector<ComplexMatrix>& vp, const std::vector<ComplexMatrix>& a) {
  const std::size_t ell = vp.size(), n = vp.front().n(), len = 2 * ell;
  cplx total{};
  for_each_tuple(n, len, [&](std::span<const std::size_t> k) {
    cplx prod = 1.0;
    for (std::size_t m = 0; m < ell && prod != cplx{}; ++m) {
      prod *= vp[m](k[(2 * m + len - 1) % len], k[2 * m]);
      prod *= a[m](k[2 * m], k[2 * m + 1]);
    }
    total += prod;
  });
  return total;
}

// V'_0 = U_{last}* U_{first}, V'_m = U_{m-1}* U_m.
std::vector<ComplexMatrix> twisted_factors(const std::vector<ComplexMatrix>& u) {
  const std::size_t ell = u.size();
  std::vector<ComplexMatrix> vp;
  vp.reserve(ell);
  for (std::size_t m = 0; m < ell; ++m) vp.push_back(u[(m + ell - 1) % ell].adjoint() * u[m]);
  return vp;
}

cplx conjugated_trace(const std::vector<ComplexMatrix>& u, const std::vector<ComplexMatrix>& a) {
  ComplexMatrix prod = ComplexMatrix::identity(a.front().n());
  for (std::size_t m = 0; m < u.size(); ++m) prod = prod * (u[m] * a[m] * u[m].adjoint());
  return prod.trace();
}

bool close(cplx x, cplx y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

std::vector<SignedPermutation> signed_permutation_group(std::size_t n) {
  if (n == 0) throw ValidationError("signed_permutation_group: n must be positive");
  if (n > 4) throw CapacityError("signed_permutation_group: n=" + std::to_string(n) + " exceeds 4");
  std::vector<SignedPermutation> out;
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  do {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = (mask >> i) & 1u ? -1 : 1;
      out.emplace_back(s, std::move(e));
    }
  } while (std::next_permutation(s.begin(), s.end()));
  return out;
}

cplx group_average_trace(const std::vector<ComplexMatrix>& v_list, const std::vector<ComplexMatrix>& a) {
  if (v_list.size() != a.size()) throw ShapeError("group_average_trace: need one V per matrix");
  if (a.empty()) throw ValidationError("group_average_trace: empty product");
  const std::size_t n = a.front().n();
  for (const auto& v : v_list)
    if (v.n() != n) throw ShapeError("group_average_trace: dimension mismatch");
  auto group = signed_permutation_group(n);
  cplx total{};
  std::vector<ComplexMatrix> u(v_list.size());
  for (const auto& w : group) {
    for (std::size_t m = 0; m < v_list.size(); ++m) u[m] = w.right_apply(v_list[m]);
    total += conjugated_trace(u, a);
  }
  return total / static_cast<double>(group.size());
}

cplx brute_force_group_expectation(const std::vector<ComplexMatrix>& v_list, const TraceZeroMatrixSet& a) {
  return group_average_trace(v_list, a.matrices());
}

IndexTable twisted_table_exact(const std::vector<ComplexMatrix>& v_by_index, const std::vector<std::size_t>& pattern) {
  if (v_by_index.empty()) throw ValidationError("twisted_table_exact: empty family");
  const std::size_t n = v_by_index.front().n();
  check_pattern(v_by_index, pattern, pattern.size(), n);
  const std::size_t ell = pattern.size(), len = 2 * ell;
  IndexTable f(n, len);
  auto group = signed_permutation_group(n);
  std::vector<ComplexMatrix> u(ell);
  for (const auto& w : group) {
    for (std::size_t m = 0; m < ell; ++m) u[m] = w.right_apply(v_by_index[pattern[m]]);
    auto vp = twisted_factors(u);
    std::size_t flat = 0;
    for_each_tuple(n, len, [&](std::span<const std::size_t> k) {
      cplx prod = 1.0;
      for (std::size_t m = 0; m < ell; ++m) prod *= vp[m](k[(2 * m + len - 1) % len], k[2 * m]);
      f.values()[flat++] += prod;
    });
  }
  for (auto& z : f.values()) z /= static_cast<double>(group.size());
  return f;
}

VerificationReport verify_twist_identity_exact(const std::vector<ComplexMatrix>& v_by_index,
                                               const std::vector<std::size_t>& pattern,
                                               const TraceZeroMatrixSet& a) {
  check_pattern(v_by_index, pattern, a.size(), a.n());
  const std::size_t ell = pattern.size();
  IndexTable f = twisted_table_exact(v_by_index, pattern);

  cplx lhs{};
  std::size_t flat = 0;
  for_each_tuple(a.n(), 2 * ell, [&](std::span<const std::size_t> k) {
    cplx prod = f.values()[flat++];
    for (std::size_t m = 0; m < ell; ++m) prod *= a[m](k[2 * m], k[2 * m + 1]);
    lhs += prod;
  });

  std::vector<ComplexMatrix> vs;
  for (std::size_t p : pattern) vs.push_back(v_by_index[p]);
  const cplx rhs = brute_force_group_expectation(vs, a);

  // Third route: average of tr(V'_1 A_1 ... V'_l A_l) itself.
  cplx middle{};
  auto group = signed_permutation_group(a.n());
  std::vector<ComplexMatrix> u(ell);
  for (const auto& w : group) {
    for (std::size_t m = 0; m < ell; ++m) u[m] = w.right_apply(vs[m]);
    auto vp = twisted_factors(u);
    ComplexMatrix prod = ComplexMatrix::identity(a.n());
    for (std::size_t m = 0; m < ell; ++m) prod = prod * vp[m] * a[m];
    middle += prod.trace();
  }
  middle /= static_cast<double>(group.size());

  const double tol = kTolerances.exact_identity;
  VerificationReport r;
  r.name = "twist_identity_exact";
  r.instances_checked = 1;
  r.bound_used = tol;
  r.max_ratio = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  r.passed = close(lhs, rhs, tol) && close(middle, rhs, tol);
  r.details.push_back({{"n", a.n()}, {"ell", ell}, {"contraction", cjson(lhs)}, {"trace_product", cjson(middle)},
                       {"conjugated_trace", cjson(rhs)}});
  return r;
}

VerificationReport verify_twist_identity(const FamilySampler& sampler, const std::vector<std::size_t>& pattern,
                                         const TraceZeroMatrixSet& a, std::size_t trials, const SeededRng& rng) {
  if (trials < 2) throw ValidationError("verify_twist_identity: need at least 2 trials");
  const std::size_t ell = pattern.size(), n = a.n();
  if (ell != a.size()) throw ShapeError("verify_twist_identity: pattern length differs from the matrices");
  if (std::pow(static_cast<double>(n), 2.0 * static_cast<double>(ell)) > static_cast<double>(IndexTable::kCapacity))
    throw CapacityError("verify_twist_identity: n^{2 ell} exceeds 1e7");

  auto members = [&](SeededRng& local) {
    LiberatingFamily fam = sampler(local);
    if (fam.n() != n) throw ShapeError("verify_twist_identity: family dimension differs from the matrices");
    std::vector<ComplexMatrix> u;
    for (std::size_t p : pattern) {
      if (p >= fam.size()) throw ValidationError("verify_twist_identity: pattern index outside the family");
      u.push_back(fam[p]);
    }
    return u;
  };
  // Even streams feed the table side, odd streams the trace side.
  auto contraction = parallel_map(trials, [&](std::size_t t) {
    SeededRng local = rng.derive(2 * t);
    return twisted_contraction(twisted_factors(members(local)), a.matrices());
  });
  auto traces = parallel_map(trials, [&](std::size_t t) {
    SeededRng local = rng.derive(2 * t + 1);
    return conjugated_trace(members(local), a.matrices());
  });

  auto summarize = [](const std::vector<cplx>& xs, cplx& mean, double& se) {
    std::vector<double> re, im;
    for (auto z : xs) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    auto mr = mean_and_se(re), mi = mean_and_se(im);
    mean = {mr.mean, mi.mean};
    se = std::hypot(mr.se, mi.se);
  };
  cplx lhs, rhs;
  double se_l = 0, se_r = 0;
  summarize(contraction, lhs, se_l);
  summarize(traces, rhs, se_r);
  const double allowed = std::max(5.0 * std::hypot(se_l, se_r), kTolerances.exact_identity);

  VerificationReport r;
  r.name = "twist_identity_monte_carlo";
  r.instances_checked = trials;
  r.bound_used = 5.0;
  r.max_ratio = std::hypot(se_l, se_r) > 0 ? std::abs(lhs - rhs) / std::hypot(se_l, se_r) : 0.0;
  r.passed = std::abs(lhs - rhs) <= allowed;
  r.details.push_back({{"contraction", cjson(lhs)}, {"contraction_se", se_l}, {"trace", cjson(rhs)},
                       {"trace_se", se_r}});
  return r;
}

VerificationReport verify_less_jarring_recursion(const std::vector<ComplexMatrix>& v_by_index,
                                                 const std::vector<std::size_t>& pattern,
                                                 const TraceZeroMatrixSet& a) {
  check_pattern(v_by_index, pattern, a.size(), a.n());
  const std::size_t ell = pattern.size();
  if (ell < 3) throw ValidationError("verify_less_jarring_recursion: need ell >= 3");
  if (pattern.front() != pattern.back())
    throw ValidationError("verify_less_jarring_recursion: pattern must start and end on the same index");
  for (std::size_t m = 0; m + 1 < ell; ++m)
    if (pattern[m] == pattern[m + 1])
      throw ValidationError("verify_less_jarring_recursion: adjacent pattern indices must differ");

  const std::size_t n = a.n();
  auto vs = [&](std::size_t from, std::size_t to) {
    std::vector<ComplexMatrix> out;
    for (std::size_t m = from; m < to; ++m) out.push_back(v_by_index[pattern[m]]);
    return out;
  };
  const auto& am = a.matrices();
  const cplx lhs = group_average_trace(vs(0, ell), am);

  ComplexMatrix joined = am[ell - 1] * am[0];
  const cplx c = joined.trace() / static_cast<double>(n);
  joined -= ComplexMatrix::identity(n) * c;
  std::vector<ComplexMatrix> first{joined};
  first.insert(first.end(), am.begin() + 1, am.end() - 1);
  const cplx term1 = group_average_trace(vs(0, ell - 1), first);
  std::vector<ComplexMatrix> middle(am.begin() + 1, am.end() - 1);
  const cplx term2 = c * group_average_trace(vs(1, ell - 1), middle);
  const cplx rhs = term1 + term2;

  VerificationReport r;
  r.name = "less_jarring_recursion";
  r.instances_checked = 1;
  r.bound_used = kTolerances.exact_identity;
  r.max_ratio = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  r.passed = close(lhs, rhs, kTolerances.exact_identity);
  r.details.push_back({{"n", n}, {"ell", ell}, {"lhs", cjson(lhs)}, {"rhs", cjson(rhs)}});
  return r;
}

}  // namespace liblab
