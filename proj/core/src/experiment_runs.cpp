#include <algorithm>
#include <cmath>
#include <map>

#include "experiment_util.hpp"
#include "liblab/errors.hpp"
#include "liblab/experiments.hpp"

namespace liblab {

namespace detail {

bool is_diagonal(const ComplexMatrix& a) {
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j && a(i, j) != cplx{}) return false;
  return true;
}

ComplexMatrix sandwich(const ComplexMatrix& v, const ComplexMatrix& b) {
  if (!is_diagonal(b)) return v * b * v.adjoint();
  ComplexMatrix vb = v;
  const std::size_t n = v.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vb(i, j) *= b(j, j);
  return vb * v.adjoint();
}

ComplexMatrix hermitize(const ComplexMatrix& a) {
  ComplexMatrix h = a;
  for (std::size_t i = 0; i < a.n(); ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.n(); ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

void add_moment_checks(ExperimentReport& r, const std::vector<std::vector<double>>& spectra,
                       const MomentSequence& target, double abs_tol) {
  const std::size_t k = r.config.moment_order;
  std::vector<std::vector<double>> per_order(k);
  for (const auto& ev : spectra) {
    std::vector<double> m(k, 0.0);
    for (double x : ev) {
      double p = 1.0;
      for (std::size_t j = 0; j < k; ++j) m[j] += (p *= x);
    }
    for (std::size_t j = 0; j < k; ++j) per_order[j].push_back(m[j] / static_cast<double>(ev.size()));
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto e = mean_and_se(per_order[j]);
    r.moments.push_back(e.mean);
    r.se.push_back(e.se);
    r.targets.push_back(target[j + 1]);
    r.checks.push_back(
        moment_check("moment_" + std::to_string(j + 1), e.mean, e.se, target[j + 1], abs_tol, r.config.z));
  }
}

}  // namespace detail

using namespace detail;

namespace {

std::vector<double> pooled(const std::vector<std::vector<double>>& spectra) {
  std::vector<double> all;
  for (const auto& ev : spectra) all.insert(all.end(), ev.begin(), ev.end());
  return all;
}

double abs_tol_or(const ExperimentConfig& c, double fallback) { return c.abs_tol.value_or(fallback); }

}  // namespace

ComplexMatrix sample_unit_trace_zero(std::size_t n, SeededRng& rng) {
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double g = rng.standard_normal() * (i == j ? 1.0 : 1.0 / std::sqrt(2.0));
      a(i, j) = g;
      a(j, i) = g;
    }
  const cplx t = a.trace() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) -= t;
  const SpectralSample spec = hermitian_eigenvalues(a);
  const auto ev = spec.eigenvalues();
  const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
  if (norm > 0) a *= 1.0 / norm;
  return a;
}

ComplexEstimate liberation_estimate(const FamilySampler& sampler, const std::vector<std::size_t>& pattern,
                                    const TraceZeroMatrixSet& a, std::size_t trials, const SeededRng& rng) {
  validate_jarring_pattern(pattern);
  if (pattern.size() != a.size()) throw ShapeError("liberation_estimate: pattern and matrix count differ");
  if (trials < 1) throw ValidationError("liberation_estimate: trials must be at least 1");
  const std::size_t ell = pattern.size();
  auto values = parallel_map(trials, [&](std::size_t t) {
    SeededRng local = rng.derive(t);
    LiberatingFamily fam = sampler(local);
    for (std::size_t i : pattern)
      if (i >= fam.size()) throw ValidationError("liberation_estimate: pattern index beyond family size");
    // tr(prod U A U*) = tr(A_1 G_1 A_2 G_2 ... A_l G_l), G_m = U_{i_m}* U_{i_{m+1}}.
    std::map<std::pair<std::size_t, std::size_t>, ComplexMatrix> g;
    auto link = [&](std::size_t x, std::size_t y) -> const ComplexMatrix& {
      auto key = std::make_pair(x, y);
      if (auto it = g.find(key); it != g.end()) return it->second;
      if (auto it = g.find({y, x}); it != g.end()) return g.emplace(key, it->second.adjoint()).first->second;
      return g.emplace(key, fam[x].adjoint() * fam[y]).first->second;
    };
    ComplexMatrix c = a[0];
    for (std::size_t m = 0; m + 1 < ell; ++m) {
      c = c * link(pattern[m], pattern[m + 1]);
      c = c * a[m + 1];
    }
    const ComplexMatrix& last = link(pattern[ell - 1], pattern[0]);
    cplx tr{};
    const std::size_t n = c.n();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) tr += c(i, j) * last(j, i);
    return tr;
  });
  std::vector<double> re, im;
  for (auto v : values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  auto r = mean_and_se(re), i = mean_and_se(im);
  return {cplx(r.mean, i.mean), std::hypot(r.se, i.se)};
}

ExperimentReport run_liberation(const ExperimentConfig& config) {
  config.validate();
  validate_jarring_pattern(config.pattern);
  const std::size_t index_count = *std::max_element(config.pattern.begin(), config.pattern.end()) + 1;
  if (config.family == LiberationFamily::fake_haar_pair && index_count > 2)
    throw ValidationError("fake-haar-pair family has only the labels 0 (identity) and 1 (fake Haar)");

  ExperimentReport r;
  r.config = config;
  const SeededRng root(config.seed);
  std::vector<double> xs, ys, sig;
  auto detail = nlohmann::json::array();
  for (std::size_t n : config.dimensions()) {
    const HadamardMatrix h = make_hadamard(config.hadamard, n);
    SeededRng input_rng = root.derive(mix64(n) ^ 0x1);
    std::vector<ComplexMatrix> as;
    for (std::size_t m = 0; m < config.pattern.size(); ++m) as.push_back(sample_unit_trace_zero(n, input_rng));
    TraceZeroMatrixSet set(std::move(as));
    FamilySampler sampler;
    if (config.family == LiberationFamily::hadamard_family) {
      const std::size_t extra = index_count > 2 ? index_count - 2 : 0;
      sampler = [&h, extra](SeededRng& g) { return liberating_family(h, extra, g); };
    } else {
      sampler = [&h, n](SeededRng& g) {
        return LiberatingFamily({"I", "U"}, {ComplexMatrix::identity(n), fake_haar(h, sample_signed_permutation(n, g))});
      };
    }
    auto est = liberation_estimate(sampler, config.pattern, set, config.trials, root.derive(mix64(n) ^ 0x2));
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::abs(est.mean));
    sig.push_back(est.se);
    detail.push_back({{"n", n}, {"re", est.mean.real()}, {"im", est.mean.imag()}, {"abs", std::abs(est.mean)}, {"se", est.se}});
  }
  Check growth{"no_growth", true, {{"per_n", detail}}};
  const bool all_zero = std::all_of(ys.begin(), ys.end(), [](double y) { return y <= kTolerances.exact_identity; });
  if (xs.size() >= 3 && !all_zero) {
    auto fit = wls_slope(xs, ys, sig);
    growth.passed = fit.slope <= kTolerances.trend_z * fit.se;
    growth.detail["slope"] = fit.slope;
    growth.detail["slope_se"] = fit.se;
  }
  r.checks.push_back(std::move(growth));
  return r;
}

ExperimentReport run_sum_experiment(const ExperimentConfig& config) {
  config.validate();
  const HadamardMatrix h = make_hadamard(config.hadamard, config.n);
  const std::size_t n = config.n;
  auto spectra = collect_spectra(config, [&](SeededRng& g) {
    ComplexMatrix a = config.a.sample(n, g);
    ComplexMatrix b = config.b.sample(n, g);
    ComplexMatrix u = fake_haar(h, sample_signed_permutation(n, g));
    return a + sandwich(u, b);
  });
  ExperimentReport r;
  r.config = config;
  const std::size_t k = config.moment_order;
  add_moment_checks(r, spectra, free_additive_moments(config.a.moments(k), config.b.moments(k), k),
                    abs_tol_or(config, 0.05));
  r.histogram = freedman_diaconis(pooled(spectra));
  return r;
}

namespace {

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  const double scale = std::max(1.0, a.max_abs());
  if (is_diagonal(a)) {
    std::vector<double> d(a.n());
    for (std::size_t i = 0; i < a.n(); ++i) {
      const double x = a(i, i).real();
      if (x < -kTolerances.eigen_reconstruction * scale)
        throw ValidationError("product experiment: A has a negative eigenvalue");
      d[i] = std::sqrt(std::max(0.0, x));
    }
    return ComplexMatrix::diagonal(std::span<const double>(d));
  }
  EigenSystem es = hermitian_eigensystem(HermitianMatrix(a));
  std::vector<double> d(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (es.values.eigenvalues()[i] < -kTolerances.eigen_reconstruction * scale)
      throw ValidationError("product experiment: A has a negative eigenvalue");
    d[i] = std::sqrt(std::max(0.0, es.values.eigenvalues()[i]));
  }
  return sandwich(es.vectors, ComplexMatrix::diagonal(std::span<const double>(d)));
}

}  // namespace

ExperimentReport run_product_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!config.a.nonnegative()) throw ValidationError("product experiment: A must be nonnegative definite");
  const HadamardMatrix h = make_hadamard(config.hadamard, config.n);
  const std::size_t n = config.n;
  auto spectra = collect_spectra(config, [&](SeededRng& g) {
    ComplexMatrix s = psd_sqrt(config.a.sample(n, g));
    ComplexMatrix b = config.b.sample(n, g);
    ComplexMatrix u = fake_haar(h, sample_signed_permutation(n, g));
    return sandwich(s, sandwich(u, b));
  });
  ExperimentReport r;
  r.config = config;
  const std::size_t k = config.moment_order;
  add_moment_checks(r, spectra, free_multiplicative_moments(config.a.moments(k), config.b.moments(k), k),
                    abs_tol_or(config, 0.02));
  r.histogram = freedman_diaconis(pooled(spectra));
  return r;
}

ExperimentReport run_hadamard_iid_experiment(const ExperimentConfig& config) {
  config.validate();
  const HadamardMatrix h = make_hadamard(config.hadamard, config.n);
  const std::size_t n = config.n;
  auto spectra = collect_spectra(config, [&](SeededRng& g) {
    ComplexMatrix x = config.a.sample(n, g);
    ComplexMatrix y = config.coupled ? x : config.b.sample(n, g);
    return x + sandwich(h.normalized(), y);
  });
  ExperimentReport r;
  r.config = config;
  const std::size_t k = config.moment_order;
  const MarginalSpec& law_y = config.coupled ? config.a : config.b;
  add_moment_checks(r, spectra, free_additive_moments(config.a.moments(k), law_y.moments(k), k),
                    abs_tol_or(config, 0.05));
  r.histogram = freedman_diaconis(pooled(spectra));
  return r;
}

ExperimentReport run_compression_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!config.alpha || !config.beta) throw ValidationError("compress needs alpha and beta");
  if (config.moment_order > 10) throw CapacityError("compress: moment order exceeds 10");
  const CompressionLaw law = compression_law(*config.alpha, *config.beta);
  const HadamardMatrix h = make_hadamard(config.hadamard, config.n);
  const std::size_t n = config.n;
  const MarginalSpec x_law = MarginalSpec::bernoulli(*config.alpha), y_law = MarginalSpec::bernoulli(*config.beta);
  auto spectra = collect_spectra(config, [&](SeededRng& g) {
    ComplexMatrix x = x_law.sample(n, g);
    ComplexMatrix y = y_law.sample(n, g);
    return sandwich(x, sandwich(h.normalized(), y));
  });

  ExperimentReport r;
  r.config = config;
  const double tol = abs_tol_or(config, 0.02);
  add_moment_checks(r, spectra, law_moments_by_quadrature(law, config.moment_order), tol);

  const double eps = kTolerances.atom_threshold;
  std::vector<double> atom0, atom1, continuous;
  double lo = 0.0, hi = 0.0;
  for (const auto& ev : spectra) {
    std::size_t z = 0, o = 0;
    for (double v : ev) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (v < eps)
        ++z;
      else if (v > 1.0 - eps)
        ++o;
      else
        continuous.push_back(v);
    }
    atom0.push_back(static_cast<double>(z) / static_cast<double>(ev.size()));
    atom1.push_back(static_cast<double>(o) / static_cast<double>(ev.size()));
  }
  auto a0 = mean_and_se(atom0), a1 = mean_and_se(atom1);
  r.checks.push_back(moment_check("atom0", a0.mean, a0.se, law.atom0, tol, config.z));
  r.checks.push_back(moment_check("atom1", a1.mean, a1.se, law.atom1, tol, config.z));
  r.checks.push_back({"support", lo >= -eps && hi <= 1.0 + eps, {{"min", lo}, {"max", hi}}});

  r.histogram = freedman_diaconis(continuous);
  // Continuous part against the density, both normalized to unit mass, compared at the bin edges.
  const double cont_mass = compression_continuous_mass(law);
  double ks = 0.0;
  if (!continuous.empty() && cont_mass > 0) {
    std::sort(continuous.begin(), continuous.end());
    for (double e : r.histogram.edges) {
      const double emp = static_cast<double>(std::upper_bound(continuous.begin(), continuous.end(), e) - continuous.begin()) /
                         static_cast<double>(continuous.size());
      const double th = compression_interval_mass(law, 0.0, e) / cont_mass;
      ks = std::max(ks, std::abs(emp - th));
    }
  }
  r.checks.push_back({"density_ks", ks <= tol, {{"sup_cdf_gap", ks}, {"allowed", tol}, {"continuous_mass", cont_mass}}});
  return r;
}

}  // namespace liblab
