#include "liblab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "liblab/errors.hpp"

namespace liblab {

std::string to_string(HadamardKind k) { return k == HadamardKind::sylvester ? "sylvester" : "dft"; }

HadamardKind parse_hadamard_kind(const std::string& s) {
  if (s == "sylvester") return HadamardKind::sylvester;
  if (s == "dft") return HadamardKind::dft;
  throw ValidationError("unknown Hadamard family '" + s + "' (expected sylvester or dft)");
}

HadamardMatrix make_hadamard(HadamardKind kind, std::size_t n) {
  if (kind == HadamardKind::dft) return HadamardMatrix(dft_matrix(n) * cplx(std::sqrt(static_cast<double>(n))));
  if (!is_power_of_two(n)) throw ValidationError("sylvester Hadamard needs a power-of-two dimension");
  unsigned k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return HadamardMatrix(sylvester_hadamard(k));
}

MarginalSpec MarginalSpec::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bernoulli marginal: p must lie in [0,1]");
  MarginalSpec s;
  s.kind = Kind::bernoulli;
  s.p = p;
  return s;
}

MarginalSpec MarginalSpec::explicit_matrix(ComplexMatrix m) {
  if (!m.is_hermitian()) throw ValidationError("explicit marginal must be Hermitian");
  MarginalSpec s;
  s.kind = Kind::matrix;
  s.matrix = std::move(m);
  return s;
}

MarginalSpec MarginalSpec::parse(const std::string& s) {
  if (s == "zero") return zero();
  if (s == "identity") return identity();
  if (s == "sign") return symmetric_sign();
  if (s.rfind("bernoulli:", 0) == 0) {
    std::size_t used = 0;
    double p = 0;
    try {
      p = std::stod(s.substr(10), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() - 10) throw ValidationError("bad bernoulli marginal '" + s + "'");
    return bernoulli(p);
  }
  throw ValidationError("unknown marginal '" + s + "' (expected zero, identity, sign or bernoulli:P)");
}

ComplexMatrix MarginalSpec::sample(std::size_t n, SeededRng& rng) const {
  std::vector<double> d(n, 0.0);
  switch (kind) {
    case Kind::zero:
      break;
    case Kind::identity:
      std::fill(d.begin(), d.end(), 1.0);
      break;
    case Kind::symmetric_sign:
      for (auto& x : d) x = rng.fair_sign();
      break;
    case Kind::bernoulli:
      for (auto& x : d) x = rng.uniform01() < p ? 1.0 : 0.0;
      break;
    case Kind::matrix:
      if (matrix->n() != n) throw ShapeError("explicit marginal has the wrong dimension");
      return *matrix;
  }
  return ComplexMatrix::diagonal(std::span<const double>(d));
}

MomentSequence MarginalSpec::moments(std::size_t k) const {
  switch (kind) {
    case Kind::zero:
      return MomentSequence::point_mass(0.0, k);
    case Kind::identity:
      return MomentSequence::point_mass(1.0, k);
    case Kind::symmetric_sign:
      return MomentSequence::symmetric_bernoulli(k);
    case Kind::bernoulli:
      return MomentSequence::bernoulli(p, k);
    case Kind::matrix:
      break;
  }
  auto ev = hermitian_eigenvalues(*matrix);
  std::vector<double> m(k, 0.0);
  double radius = 0.0;
  for (double x : ev.eigenvalues()) {
    radius = std::max(radius, std::abs(x));
    double p = 1.0;
    for (std::size_t j = 0; j < k; ++j) m[j] += (p *= x);
  }
  for (auto& x : m) x /= static_cast<double>(ev.size());
  return MomentSequence(std::move(m), radius);
}

bool MarginalSpec::nonnegative() const {
  if (kind == Kind::symmetric_sign) return false;
  if (kind != Kind::matrix) return true;
  auto ev = hermitian_eigenvalues(*matrix);
  return ev.size() == 0 || ev.eigenvalues().front() >= -kTolerances.eigen_reconstruction * std::max(1.0, matrix->max_abs());
}

nlohmann::json MarginalSpec::to_json() const {
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::identity:
      return "identity";
    case Kind::symmetric_sign:
      return "sign";
    case Kind::bernoulli:
      return {{"bernoulli", p}};
    case Kind::matrix:
      break;
  }
  return {{"matrix_dimension", matrix->n()}};
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  for (std::size_t d : dimensions()) {
    if (d < 2) throw ValidationError("dimension must be at least 2");
    if (hadamard == HadamardKind::sylvester && !is_power_of_two(d))
      throw ValidationError("sylvester Hadamard needs power-of-two dimensions, got " + std::to_string(d));
  }
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
  if (beta && !(*beta > 0.0 && *beta < 1.0)) throw ValidationError("beta must lie in (0,1)");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  j["moment_order"] = moment_order;
  j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
  j["beta"] = beta ? nlohmann::json(*beta) : nlohmann::json(nullptr);
  j["hadamard"] = to_string(hadamard);
  j["sweep"] = dimensions();
  j["a"] = a.to_json();
  j["b"] = b.to_json();
  j["coupled"] = coupled;
  j["abs_tol"] = abs_tol ? nlohmann::json(*abs_tol) : nlohmann::json(nullptr);
  j["z"] = z;
  j["family"] = family == LiberationFamily::hadamard_family ? "hadamard-family" : "fake-haar-pair";
  j["pattern"] = pattern;
  j["ensemble"] = ensemble == ConcentrationEnsemble::fake_haar ? "fake-haar" : "signed-permutation";
  j["mechanism_draws"] = mechanism_draws;
  j["max_sweep_ratio"] = max_sweep_ratio;
  j["inject_fault"] = inject_fault;
  return j;
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& ExperimentReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw ValidationError("report has no check named '" + name + "'");
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["moments"] = moments;
  j["se"] = se;
  j["targets"] = targets;
  j["histogram"] = {{"edges", histogram.edges}, {"masses", histogram.masses}};
  auto cs = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = cs;
  j["passed"] = passed();
  j["wall_time_ms"] = wall_time_ms ? nlohmann::json(*wall_time_ms) : nlohmann::json(nullptr);
  return j;
}

namespace {
std::string num(double x) { return nlohmann::json(x).dump(); }
}  // namespace

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "kind,index,v1,v2,v3\n";
  for (std::size_t k = 0; k < moments.size(); ++k)
    os << "moment," << k + 1 << ',' << num(moments[k]) << ',' << num(k < se.size() ? se[k] : 0.0) << ','
       << num(k < targets.size() ? targets[k] : 0.0) << '\n';
  for (std::size_t b = 0; b < histogram.masses.size(); ++b)
    os << "histogram," << b << ',' << num(histogram.edges[b]) << ',' << num(histogram.edges[b + 1]) << ','
       << num(histogram.masses[b]) << '\n';
  for (const auto& c : checks) os << "check," << c.name << ',' << (c.passed ? 1 : 0) << ",,\n";
  return os.str();
}

Check moment_check(const std::string& name, double estimate, double se, double target, double abs_tol, double z) {
  const double allowed = std::max(abs_tol, z * se);
  const double err = std::abs(estimate - target);
  return {name,
          err <= allowed,
          {{"estimate", estimate}, {"se", se}, {"target", target}, {"error", err}, {"allowed", allowed}}};
}

void validate_jarring_pattern(const std::vector<std::size_t>& pattern) {
  if (pattern.empty()) throw ValidationError("word pattern is empty");
  for (std::size_t m = 0; m < pattern.size(); ++m)
    if (pattern[m] == pattern[(m + 1) % pattern.size()])
      throw ValidationError("word pattern has cyclically adjacent equal indices at position " + std::to_string(m));
}

namespace {

ExperimentReport dispatch(const ExperimentConfig& config) {
  const std::string& e = config.experiment;
  if (e == "liberate") return run_liberation(config);
  if (e == "sum") return run_sum_experiment(config);
  if (e == "product") return run_product_experiment(config);
  if (e == "hadamard-iid") return run_hadamard_iid_experiment(config);
  if (e == "compress") return run_compression_experiment(config);
  if (e == "concentrate") return run_concentration_experiment(config);
  if (e == "verify") return run_verification_suite(config);
  throw ValidationError("unknown experiment '" + e + "'");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r = dispatch(config);
  if (config.timing)
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace liblab
