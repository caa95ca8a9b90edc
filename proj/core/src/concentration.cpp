#include <algorithm>
#include <cmath>

#include "experiment_util.hpp"
#include "liblab/errors.hpp"
#include "liblab/experiments.hpp"

namespace liblab {

using namespace detail;

namespace {

std::vector<double> sorted_spectrum(const ComplexMatrix& h) {
  auto ev = hermitian_eigenvalues(hermitize(h));
  return {ev.eigenvalues().begin(), ev.eigenvalues().end()};
}

double count_le(const std::vector<double>& sorted, double x) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

struct Inputs {
  ComplexMatrix a, b;
  std::optional<HadamardMatrix> h;
};

Inputs inputs_for(const ExperimentConfig& c, std::size_t n, bool need_hadamard) {
  SeededRng g = SeededRng(c.seed).derive(mix64(n) ^ 0x3);
  Inputs in{c.a.sample(n, g), c.b.sample(n, g), std::nullopt};
  if (!in.a.is_hermitian() || !in.b.is_hermitian()) throw ValidationError("concentration: A and B must be Hermitian");
  if (need_hadamard) in.h = make_hadamard(c.hadamard, n);
  return in;
}

ComplexMatrix draw_h(const ExperimentConfig& c, const Inputs& in, SeededRng& g) {
  SignedPermutation w = sample_signed_permutation(in.a.n(), g);
  if (c.ensemble == ConcentrationEnsemble::signed_permutation) return in.a + w.conjugate_adjoint(in.b);
  return in.a + sandwich(fake_haar(*in.h, w), in.b);
}

}  // namespace

MechanismDraw concentration_mechanism_draw(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& u,
                                           SeededRng& rng) {
  const std::size_t n = a.n();
  if (b.n() != n || u.n() != n) throw ShapeError("concentration_mechanism_draw: dimension mismatch");
  SignedPermutation wr = sample_signed_permutation(n, rng);
  SignedTransposition t = sample_signed_transposition_indices(n, rng);
  ComplexMatrix v1 = wr.conjugate_adjoint(u);
  ComplexMatrix v2 = t.as_signed_permutation(n).conjugate_adjoint(v1);
  ComplexMatrix h1 = a + sandwich(v1, b), h2 = a + sandwich(v2, b);
  ComplexMatrix d = hermitize(h1 - h2);

  MechanismDraw out;
  const double scale = std::max(1.0, std::max(h1.max_abs(), h2.max_abs()));
  if (d.max_abs() > kTolerances.exact_identity * scale)
    out.rank = numerical_rank(HermitianMatrix(d), kTolerances.rank_threshold);
  const auto e1 = sorted_spectrum(h1), e2 = sorted_spectrum(h2);
  out.edf_distance = edf_sup_distance(e1, e2, kTolerances.edf_eigen_slack * scale);
  return out;
}

ExperimentReport run_concentration_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto dims = config.dimensions();
  const bool fake = config.ensemble == ConcentrationEnsemble::fake_haar;
  const SeededRng root(config.seed);

  ExperimentReport r;
  r.config = config;
  std::vector<double> scaled;
  auto per_n = nlohmann::json::array();
  for (std::size_t n : dims) {
    const Inputs in = inputs_for(config, n, fake);
    const SeededRng stream = root.derive(mix64(n) ^ 0x4);
    SeededRng pilot_rng = stream.derive(~std::uint64_t{0});
    const auto pilot = sorted_spectrum(draw_h(config, in, pilot_rng));
    std::vector<double> xs;
    for (int q = 1; q <= 9; ++q) xs.push_back(quantile_sorted(pilot, q / 10.0));

    const bool keep = n == dims.back();
    struct Draw {
      std::vector<double> f, ev;
    };
    auto draws = parallel_map(config.trials, [&](std::size_t t) {
      SeededRng g = stream.derive(t);
      Draw d;
      d.ev = sorted_spectrum(draw_h(config, in, g));
      for (double x : xs) d.f.push_back(count_le(d.ev, x) / static_cast<double>(n));
      if (!keep) d.ev.clear();
      return d;
    });

    double var_max = 0.0;
    const double t_unit = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
    auto points = nlohmann::json::array();
    for (std::size_t q = 0; q < xs.size(); ++q) {
      std::vector<double> f;
      for (const auto& d : draws) f.push_back(d.f[q]);
      const double mean = mean_and_se(f).mean, var = sample_variance(f);
      var_max = std::max(var_max, var);
      std::size_t tail1 = 0, tail2 = 0;
      for (double v : f) {
        tail1 += std::abs(v - mean) > t_unit;
        tail2 += std::abs(v - mean) > 2 * t_unit;
      }
      const double tr = static_cast<double>(config.trials);
      points.push_back({{"x", xs[q]},
                        {"mean", mean},
                        {"variance", var},
                        {"tail_t1", static_cast<double>(tail1) / tr},
                        {"tail_t2", static_cast<double>(tail2) / tr}});
    }
    const double s = var_max * static_cast<double>(n) / std::log(static_cast<double>(n));
    scaled.push_back(s);
    per_n.push_back({{"n", n}, {"max_variance", var_max}, {"var_n_over_log_n", s}, {"tail_unit", t_unit}, {"points", points}});
    if (keep) {
      std::vector<double> all;
      for (const auto& d : draws) all.insert(all.end(), d.ev.begin(), d.ev.end());
      r.histogram = freedman_diaconis(std::move(all));
    }
  }
  const double hi = *std::max_element(scaled.begin(), scaled.end());
  const double lo = *std::min_element(scaled.begin(), scaled.end());
  const double ratio = hi == 0.0 ? 1.0 : (lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  r.checks.push_back({"variance_sweep",
                      std::isfinite(ratio) && ratio <= config.max_sweep_ratio,
                      {{"max_over_min", std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json("inf")},
                       {"allowed", config.max_sweep_ratio},
                       {"per_n", per_n}}});

  if (config.mechanism_draws > 0) {
    std::vector<Inputs> ins;
    for (std::size_t n : dims) ins.push_back(inputs_for(config, n, true));
    const SeededRng mech = root.derive(0x5);
    auto results = parallel_map(config.mechanism_draws, [&](std::size_t k) {
      const Inputs& in = ins[k % dims.size()];
      SeededRng g = mech.derive(k);
      ComplexMatrix u = fake_haar(*in.h, sample_signed_permutation(in.a.n(), g));
      return concentration_mechanism_draw(in.a, in.b, u, g);
    });
    std::size_t max_rank = 0, rank_fail = 0, edf_fail = 0;
    double max_scaled_edf = 0.0;
    for (std::size_t k = 0; k < results.size(); ++k) {
      const double n = static_cast<double>(dims[k % dims.size()]);
      max_rank = std::max(max_rank, results[k].rank);
      rank_fail += results[k].rank > 8;
      max_scaled_edf = std::max(max_scaled_edf, results[k].edf_distance * n);
      edf_fail += results[k].edf_distance * n > static_cast<double>(std::min<std::size_t>(results[k].rank, 8)) + 1e-9;
    }
    r.checks.push_back({"rank_bound", rank_fail == 0, {{"draws", results.size()}, {"max_rank", max_rank}, {"failures", rank_fail}}});
    r.checks.push_back({"edf_bound",
                        edf_fail == 0,
                        {{"draws", results.size()}, {"max_n_times_distance", max_scaled_edf}, {"failures", edf_fail}}});
  }
  return r;
}

}  // namespace liblab
