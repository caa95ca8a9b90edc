#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "liblab/ensembles.hpp"
#include "liblab/free_calculus.hpp"
#include "liblab/linalg.hpp"
#include "liblab/rng.hpp"
#include "liblab/stats.hpp"
#include "liblab/verify.hpp"

namespace liblab {

enum class HadamardKind { sylvester, dft };

std::string to_string(HadamardKind k);
HadamardKind parse_hadamard_kind(const std::string& s);
/// Sylvester needs a power of two; ValidationError otherwise.
HadamardMatrix make_hadamard(HadamardKind kind, std::size_t n);

/// Law of a diagonal input matrix, or an explicit Hermitian matrix.
struct MarginalSpec {
  enum class Kind { zero, identity, symmetric_sign, bernoulli, matrix };
  Kind kind = Kind::symmetric_sign;
  double p = 0.5;
  std::optional<ComplexMatrix> matrix;

  static MarginalSpec zero() { return {Kind::zero, 0.5, std::nullopt}; }
  static MarginalSpec identity() { return {Kind::identity, 0.5, std::nullopt}; }
  static MarginalSpec symmetric_sign() { return {Kind::symmetric_sign, 0.5, std::nullopt}; }
  static MarginalSpec bernoulli(double p);
  /// Must be Hermitian.
  static MarginalSpec explicit_matrix(ComplexMatrix m);
  /// "zero", "identity", "sign", "bernoulli:P".
  static MarginalSpec parse(const std::string& s);

  /// Diagonal kinds draw i.i.d. entries; matrix kind returns the matrix (n must match).
  ComplexMatrix sample(std::size_t n, SeededRng& rng) const;
  MomentSequence moments(std::size_t k) const;
  bool nonnegative() const;
  nlohmann::json to_json() const;
};

enum class ConcentrationEnsemble { fake_haar, signed_permutation };
enum class LiberationFamily { hadamard_family, fake_haar_pair };

struct ExperimentConfig {
  std::string experiment;
  std::size_t n = 512;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  std::size_t moment_order = 6;
  std::optional<double> alpha, beta;
  HadamardKind hadamard = HadamardKind::dft;
  std::string output_path;
  /// Dimensions for sweep experiments; empty means {n}.
  std::vector<std::size_t> sweep;

  MarginalSpec a = MarginalSpec::symmetric_sign();
  MarginalSpec b = MarginalSpec::symmetric_sign();
  /// hadamard-iid: Y = X.
  bool coupled = false;
  /// Moment verdicts use max(abs_tol, z se). Unset means the experiment's default
  /// (0.05 for sum and hadamard-iid, 0.02 for product and compress).
  std::optional<double> abs_tol;
  double z = 4.0;

  LiberationFamily family = LiberationFamily::hadamard_family;
  std::vector<std::size_t> pattern{0, 1};

  ConcentrationEnsemble ensemble = ConcentrationEnsemble::signed_permutation;
  std::size_t mechanism_draws = 1000;
  double max_sweep_ratio = 4.0;

  bool inject_fault = false;
  /// wall_time_ms is null unless set, so reports stay byte-identical.
  bool timing = false;

  std::vector<std::size_t> dimensions() const { return sweep.empty() ? std::vector<std::size_t>{n} : sweep; }
  /// n >= 2, trials >= 1, sylvester needs powers of two.
  void validate() const;
  nlohmann::json to_json() const;
};

struct Check {
  std::string name;
  bool passed = false;
  nlohmann::json detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<double> moments, se, targets;
  Histogram histogram;
  std::vector<Check> checks;
  std::optional<double> wall_time_ms;

  bool passed() const;
  const Check& check(const std::string& name) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// |estimate - target| <= max(abs_tol, z se)
Check moment_check(const std::string& name, double estimate, double se, double target, double abs_tol, double z);

/// Jarring pattern: cyclically adjacent labels differ. ValidationError otherwise.
void validate_jarring_pattern(const std::vector<std::size_t>& pattern);

struct ComplexEstimate {
  cplx mean;
  double se = 0.0;
};

/// E tr(U_{i_1} A_1 U_{i_1}* ... U_{i_l} A_l U_{i_l}*) over `trials` family draws.
ComplexEstimate liberation_estimate(const FamilySampler& sampler, const std::vector<std::size_t>& pattern,
                                    const TraceZeroMatrixSet& a, std::size_t trials, const SeededRng& rng);

/// Real symmetric Gaussian, trace removed, scaled to operator norm 1.
ComplexMatrix sample_unit_trace_zero(std::size_t n, SeededRng& rng);

ExperimentReport run_liberation(const ExperimentConfig& config);
ExperimentReport run_sum_experiment(const ExperimentConfig& config);
ExperimentReport run_product_experiment(const ExperimentConfig& config);
ExperimentReport run_hadamard_iid_experiment(const ExperimentConfig& config);
ExperimentReport run_compression_experiment(const ExperimentConfig& config);
ExperimentReport run_concentration_experiment(const ExperimentConfig& config);
ExperimentReport run_verification_suite(const ExperimentConfig& config);

/// Dispatches on config.experiment: liberate, sum, product, hadamard-iid, compress, concentrate, verify.
/// Fills wall_time_ms when config.timing is set.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct MechanismDraw {
  std::size_t rank = 0;
  double edf_distance = 0.0;
};

/// One draw of the signed-transposition argument: V' = W U W*, V'' = T V' T*, H = A + V B V*.
/// Returns rank(H' - H'') and sup |F_{H'} - F_{H''}|.
MechanismDraw concentration_mechanism_draw(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& u,
                                           SeededRng& rng);

}  // namespace liblab
