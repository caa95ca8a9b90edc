#include "liblab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "liblab/errors.hpp"
#include "liblab/parallel.hpp"
#include "liblab/stats.hpp"

namespace liblab {

bool is_trace_zero(const ComplexMatrix& a) {
  const double scale = static_cast<double>(a.n()) * std::max(1.0, a.max_abs());
  return std::abs(a.trace()) <= kTolerances.trace_zero * scale;
}

TraceZeroMatrixSet::TraceZeroMatrixSet(std::vector<ComplexMatrix> matrices) : a_(std::move(matrices)) {
  for (std::size_t m = 0; m < a_.size(); ++m) {
    if (a_[m].n() != a_.front().n()) throw ShapeError("TraceZeroMatrixSet: dimension mismatch");
    if (!is_trace_zero(a_[m]))
      throw ValidationError("TraceZeroMatrixSet: matrix " + std::to_string(m) + " has nonzero trace");
  }
}

ComplexMatrix sample_trace_zero_matrix(std::size_t n, SeededRng& rng, bool hermitian) {
  ComplexMatrix x(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (auto& z : x.entries()) z = cplx(s * rng.standard_normal(), s * rng.standard_normal());
  if (hermitian) {
    ComplexMatrix h = x + x.adjoint();
    h *= s;
    x = std::move(h);
    // Exact symmetry after rounding.
    for (std::size_t i = 0; i < n; ++i) {
      x(i, i) = x(i, i).real();
      for (std::size_t j = i + 1; j < n; ++j) x(j, i) = std::conj(x(i, j));
    }
  }
  const cplx t = x.trace() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) x(i, i) -= t;
  return x;
}

nlohmann::json VerificationReport::to_json() const {
  return {{"name", name},           {"instances_checked", instances_checked},
          {"max_ratio", max_ratio}, {"bound_used", bound_used},
          {"passed", passed},       {"details", details}};
}

namespace {

double product_hs(const std::vector<ComplexMatrix>& a) {
  double p = 1.0;
  for (const auto& m : a) p *= hs_norm(m);
  return p;
}

std::vector<std::uint8_t> rgs_of(std::span<const std::size_t> t) { return partition_of_tuple(t).rgs(); }

struct SlopeVerdict {
  SlopeEstimate fit;
  bool passed = true;
};

SlopeVerdict slope_verdict(const std::vector<double>& log_n, const std::vector<double>& log_ratio,
                           const SweepOptions& opts) {
  SlopeVerdict v;
  v.fit = ols_slope(log_n, log_ratio);
  const double slack = opts.slope_band + opts.z * v.fit.se;
  v.passed = v.fit.slope <= slack && (!opts.two_sided || v.fit.slope >= -slack);
  return v;
}

std::uint64_t sweep_stream(std::size_t n, std::size_t instance) { return mix64(n) ^ (instance + 1); }

}  // namespace

VerificationReport verify_theorem_fake(const IndexTable& f, const TraceZeroMatrixSet& a) {
  const std::size_t ell = a.size(), n = a.n();
  if (ell == 0) throw ValidationError("verify_theorem_fake: need at least one matrix");
  if (f.length() != 2 * ell || f.n() != n) throw ShapeError("verify_theorem_fake: table shape does not match");
  ChiChiCheck check = chichi_table_check(f);
  if (!check.passed()) throw ValidationError("verify_theorem_fake: table is not of chi-chi class");

  cplx sum{};
  std::size_t flat = 0;
  const auto& am = a.matrices();
  for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> i) {
    cplx v = f.values()[flat++];
    if (v == cplx{}) return;
    for (std::size_t m = 0; m < ell; ++m) v *= am[m](i[2 * m], i[2 * m + 1]);
    sum += v;
  });
  const double lhs = std::abs(sum);
  const double denom = f.max_abs() * product_hs(am);
  VerificationReport r;
  r.name = "theorem_fake";
  r.instances_checked = 1;
  r.max_ratio = denom > 0 ? lhs / denom : 0.0;
  r.bound_used = std::pow(static_cast<double>(n), static_cast<double>(ell));
  r.passed = r.max_ratio <= r.bound_used * (1.0 + 1e-12);
  r.details.push_back({{"n", n}, {"ell", ell}, {"lhs", lhs}, {"ratio", r.max_ratio}});
  return r;
}

IndexTable random_chichi_table(std::size_t n, std::size_t ell, SeededRng& rng, ChiChiTableKind kind) {
  IndexTable f(n, 2 * ell);
  if (kind == ChiChiTableKind::permutation_invariant) {
    std::map<std::vector<std::uint8_t>, double> g;
    for (const auto& p : all_partitions(2 * ell))
      if (in_part_chi(p)) g[p.rgs()] = 2.0 * rng.uniform01() - 1.0;
    std::size_t flat = 0;
    for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> t) {
      auto it = g.find(rgs_of(t));
      f.values()[flat++] = it == g.end() ? 0.0 : it->second;
    });
  } else {
    const std::uint64_t salt = rng();
    std::size_t flat = 0;
    for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> t) {
      SetPartition p = partition_of_tuple(t);
      double v = 0.0;
      if (in_part_chi(p)) {
        std::uint64_t h = salt;
        for (std::uint8_t b : p.rgs()) h = mix64(h ^ b);
        for (std::size_t x : clump(p)) h = mix64(h ^ (x << 32) ^ t[x]);
        v = 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
      }
      f.values()[flat++] = v;
    });
  }
  const double m = f.max_abs();
  if (m > 0)
    for (auto& z : f.values()) z /= m;
  return f;
}

VerificationReport theorem_fake_sweep(const SweepOptions& opts, const SeededRng& rng) {
  struct Job {
    std::size_t n, instance;
  };
  std::vector<Job> jobs;
  for (std::size_t n : opts.ns)
    for (std::size_t t = 0; t < opts.instances; ++t) jobs.push_back({n, t});
  auto ratios = parallel_map(jobs.size(), [&](std::size_t k) {
    SeededRng local = rng.derive(sweep_stream(jobs[k].n, jobs[k].instance));
    IndexTable f = random_chichi_table(jobs[k].n, opts.ell, local);
    ComplexMatrix a = sample_trace_zero_matrix(jobs[k].n, local, true);
    TraceZeroMatrixSet set(std::vector<ComplexMatrix>(opts.ell, a));
    return verify_theorem_fake(f, set);
  });

  VerificationReport r;
  r.name = "theorem_fake_sweep";
  r.bound_used = opts.slope_band;
  std::vector<double> xs, ys;
  for (std::size_t n : opts.ns) {
    std::vector<double> vals;
    for (std::size_t k = 0; k < jobs.size(); ++k)
      if (jobs[k].n == n) {
        const auto& rep = ratios[k];
        vals.push_back(rep.max_ratio);
        r.passed &= rep.passed;
        r.max_ratio = std::max(r.max_ratio, rep.max_ratio);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(std::max(rep.max_ratio, 1e-300)));
      }
    auto m = mean_and_se(vals);
    r.details.push_back({{"n", n},
                         {"mean_ratio", m.mean},
                         {"se", m.se},
                         {"max_ratio", *std::max_element(vals.begin(), vals.end())},
                         {"trivial_bound", std::pow(static_cast<double>(n), static_cast<double>(opts.ell))}});
  }
  r.instances_checked = jobs.size();
  if (opts.ns.size() >= 2) {
    auto v = slope_verdict(xs, ys, opts);
    r.passed &= v.passed;
    r.details.push_back({{"log_log_slope", v.fit.slope}, {"slope_se", v.fit.se}});
  }
  return r;
}

VerificationReport verify_distinct_summation(const std::vector<std::vector<cplx>>& f, const std::vector<std::size_t>& j) {
  const std::size_t ell = f.size();
  if (ell == 0) throw ValidationError("verify_distinct_summation: need at least one function");
  const std::size_t n = f.front().size();
  for (const auto& fl : f) {
    if (fl.size() != n) throw ShapeError("verify_distinct_summation: functions differ in length");
    double scale = 0;
    cplx s{};
    for (auto z : fl) {
      s += z;
      scale = std::max(scale, std::abs(z));
    }
    if (std::abs(s) > kTolerances.trace_zero * static_cast<double>(n) * std::max(1.0, scale))
      throw ValidationError("verify_distinct_summation: function does not sum to zero");
  }
  if (std::pow(static_cast<double>(n), static_cast<double>(ell)) > static_cast<double>(IndexTable::kCapacity))
    throw CapacityError("verify_distinct_summation: n^ell exceeds 1e7");
  std::vector<bool> in_j(n, false);
  for (std::size_t x : j) {
    if (x >= n) throw ValidationError("verify_distinct_summation: J index out of range");
    in_j[x] = true;
  }

  cplx lhs{};
  double rhs_sum = 0.0, total_abs = 0.0;
  std::vector<std::size_t> count(n);
  for_each_tuple(n, ell, [&](std::span<const std::size_t> t) {
    cplx v = 1.0;
    for (std::size_t m = 0; m < ell; ++m) v *= f[m][t[m]];
    const double av = std::abs(v);
    total_abs += av;
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t x : t) ++count[x];
    bool distinct_outside = true, chi_j = true;
    for (std::size_t x : t) {
      if (count[x] != 1 || in_j[x]) distinct_outside = false;
      if (count[x] == 1 && !in_j[x]) chi_j = false;
    }
    if (distinct_outside) lhs += v;
    if (chi_j) rhs_sum += av;
  });
  const double rhs = std::pow(static_cast<double>(ell), 2.0 * static_cast<double>(ell)) * rhs_sum;

  cplx mobius{};
  for (const auto& p : all_partitions(ell))
    mobius += static_cast<double>(mobius_zero(p)) * block_product_sum(f, p, in_j);

  VerificationReport r;
  r.name = "distinct_summation";
  r.instances_checked = 1;
  r.bound_used = rhs;
  r.max_ratio = rhs > 0 ? std::abs(lhs) / rhs : 0.0;
  const bool bound_ok = std::abs(lhs) <= rhs * (1.0 + 1e-12) + 1e-12 * std::max(1.0, total_abs);
  const bool routes_agree = std::abs(mobius - lhs) <= 1e-9 * std::max(1.0, total_abs);
  r.passed = bound_ok && routes_agree;
  r.details.push_back({{"ell", ell},
                       {"n", n},
                       {"lhs", std::abs(lhs)},
                       {"rhs", rhs},
                       {"mobius_route", std::abs(mobius)},
                       {"routes_agree", routes_agree}});
  return r;
}

VerificationReport verify_yin_analogue(const std::vector<ComplexMatrix>& a) {
  const std::size_t ell = a.size();
  if (ell == 0) throw ValidationError("verify_yin_analogue: need at least one matrix");
  const std::size_t n = a.front().n();
  for (const auto& m : a)
    if (m.n() != n) throw ShapeError("verify_yin_analogue: dimension mismatch");
  if (std::pow(static_cast<double>(n), 2.0 * static_cast<double>(ell)) > static_cast<double>(IndexTable::kCapacity))
    throw CapacityError("verify_yin_analogue: n^{2 ell} exceeds 1e7");

  std::map<std::vector<std::uint8_t>, bool> member;
  for (const auto& p : all_partitions(2 * ell)) member[p.rgs()] = in_part_chichi(p);
  double sum = 0.0;
  for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> t) {
    double v = 1.0;
    for (std::size_t m = 0; m < ell && v != 0.0; ++m) v *= std::abs(a[m](t[2 * m], t[2 * m + 1]));
    if (v != 0.0 && member[rgs_of(t)]) sum += v;
  });
  const double denom = product_hs(a);
  VerificationReport r;
  r.name = "yin_analogue";
  r.instances_checked = 1;
  r.max_ratio = denom > 0 ? sum / denom : 0.0;
  r.bound_used = std::pow(static_cast<double>(n), static_cast<double>(ell));
  r.passed = r.max_ratio <= r.bound_used * (1.0 + 1e-12);
  r.details.push_back({{"n", n}, {"ell", ell}, {"sum", sum}, {"ratio", r.max_ratio}});
  return r;
}

VerificationReport yin_analogue_sweep(const SweepOptions& opts, const SeededRng& rng) {
  struct Job {
    std::size_t n, instance;
  };
  std::vector<Job> jobs;
  for (std::size_t n : opts.ns)
    for (std::size_t t = 0; t < opts.instances; ++t) jobs.push_back({n, t});
  auto reps = parallel_map(jobs.size(), [&](std::size_t k) {
    SeededRng local = rng.derive(sweep_stream(jobs[k].n, jobs[k].instance));
    std::vector<ComplexMatrix> a;
    for (std::size_t m = 0; m < opts.ell; ++m) a.push_back(sample_trace_zero_matrix(jobs[k].n, local));
    return verify_yin_analogue(a);
  });
  VerificationReport r;
  r.name = "yin_analogue_sweep";
  r.bound_used = opts.slope_band;
  r.instances_checked = jobs.size();
  std::vector<double> xs, ys;
  for (std::size_t n : opts.ns) {
    std::vector<double> vals;
    for (std::size_t k = 0; k < jobs.size(); ++k)
      if (jobs[k].n == n) {
        vals.push_back(reps[k].max_ratio);
        r.passed &= reps[k].passed;
        r.max_ratio = std::max(r.max_ratio, reps[k].max_ratio);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(std::max(reps[k].max_ratio, 1e-300)));
      }
    auto m = mean_and_se(vals);
    r.details.push_back({{"n", n}, {"mean_ratio", m.mean}, {"se", m.se}});
  }
  if (opts.ns.size() >= 2 && opts.ell >= 2) {
    auto v = slope_verdict(xs, ys, opts);
    r.passed &= v.passed;
    r.details.push_back({{"log_log_slope", v.fit.slope}, {"slope_se", v.fit.se}});
  }
  return r;
}

std::vector<WhittleEstimate> fibonacci_whittle_ratio(const ComplexMatrix& a, const std::vector<double>& p_values,
                                                     std::size_t trials, const SeededRng& rng) {
  if (trials < 2) throw ValidationError("fibonacci_whittle_ratio: need at least 2 trials");
  for (double p : p_values)
    if (!(p >= 2.0)) throw ValidationError("fibonacci_whittle_ratio: exponents must be >= 2");
  const std::size_t n = a.n();
  const double norm = hs_norm(a);
  const cplx tr = a.trace();
  auto q = parallel_map(trials, [&](std::size_t t) {
    SeededRng local = rng.derive(t);
    std::vector<double> phi(n);
    for (auto& x : phi) x = sample_fibonacci(local);
    cplx s{};
    for (std::size_t i = 0; i < n; ++i) {
      cplx row{};
      for (std::size_t j = 0; j < n; ++j) row += a(i, j) * phi[j];
      s += phi[i] * row;
    }
    return std::abs(s - tr);
  });
  std::vector<WhittleEstimate> out;
  for (double p : p_values) {
    std::vector<double> powers(trials);
    for (std::size_t t = 0; t < trials; ++t) powers[t] = std::pow(q[t], p);
    auto m = mean_and_se(powers);
    WhittleEstimate e;
    e.p = p;
    if (norm > 0 && m.mean > 0) {
      e.ratio = std::pow(m.mean, 1.0 / p) / norm;
      e.se = std::pow(m.mean, 1.0 / p - 1.0) / p * m.se / norm;
    }
    out.push_back(e);
  }
  return out;
}

VerificationReport verify_fibonacci_whittle(const ComplexMatrix& a, const std::vector<double>& p_values,
                                            std::size_t trials, const SeededRng& rng) {
  VerificationReport r;
  r.name = "fibonacci_whittle";
  r.instances_checked = trials;
  for (const auto& e : fibonacci_whittle_ratio(a, p_values, trials, rng)) {
    r.max_ratio = std::max(r.max_ratio, e.ratio);
    r.passed &= std::isfinite(e.ratio);
    r.details.push_back({{"p", e.p}, {"ratio", e.ratio}, {"se", e.se}});
  }
  return r;
}

VerificationReport fibonacci_whittle_sweep(const SweepOptions& opts, const std::vector<double>& p_values,
                                           std::size_t trials, const SeededRng& rng) {
  VerificationReport r;
  r.name = "fibonacci_whittle_sweep";
  r.bound_used = opts.slope_band;
  std::vector<double> xs;
  std::vector<std::vector<double>> ys(p_values.size());
  for (std::size_t n : opts.ns)
    for (std::size_t t = 0; t < opts.instances; ++t) {
      SeededRng local = rng.derive(sweep_stream(n, t));
      ComplexMatrix a = sample_trace_zero_matrix(n, local);
      auto est = fibonacci_whittle_ratio(a, p_values, trials, local.derive(0));
      xs.push_back(std::log(static_cast<double>(n)));
      for (std::size_t k = 0; k < est.size(); ++k) {
        ys[k].push_back(std::log(std::max(est[k].ratio, 1e-300)));
        r.max_ratio = std::max(r.max_ratio, est[k].ratio);
      }
      ++r.instances_checked;
    }
  for (std::size_t k = 0; k < p_values.size(); ++k) {
    if (opts.ns.size() < 2) break;
    auto v = slope_verdict(xs, ys[k], opts);
    r.passed &= v.passed;
    r.details.push_back({{"p", p_values[k]}, {"log_log_slope", v.fit.slope}, {"slope_se", v.fit.se}});
  }
  return r;
}

}  // namespace liblab
