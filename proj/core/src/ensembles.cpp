#include "liblab/ensembles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "liblab/errors.hpp"
#include "liblab/parallel.hpp"
#include "liblab/stats.hpp"

namespace liblab {

SignedPermutation::SignedPermutation(std::vector<std::size_t> sigma, std::vector<int> eps)
    : sigma_(std::move(sigma)), eps_(std::move(eps)), inv_(sigma_.size(), sigma_.size()) {
  if (sigma_.size() != eps_.size()) throw ValidationError("SignedPermutation: sigma and eps differ in length");
  for (std::size_t j = 0; j < sigma_.size(); ++j) {
    std::size_t s = sigma_[j];
    if (s >= sigma_.size() || inv_[s] != sigma_.size())
      throw ValidationError("SignedPermutation: sigma is not a bijection");
    inv_[s] = j;
  }
  for (int e : eps_)
    if (e != 1 && e != -1) throw ValidationError("SignedPermutation: signs must be +1 or -1");
}

SignedPermutation SignedPermutation::identity(std::size_t n) {
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return SignedPermutation(std::move(s), std::vector<int>(n, 1));
}

ComplexMatrix SignedPermutation::dense() const {
  ComplexMatrix w(n());
  for (std::size_t j = 0; j < n(); ++j) w(sigma_[j], j) = eps_[sigma_[j]];
  return w;
}

SignedPermutation SignedPermutation::inverse() const {
  std::vector<int> e(n());
  for (std::size_t i = 0; i < n(); ++i) e[i] = eps_[sigma_[i]];
  return SignedPermutation(inv_, std::move(e));
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& o) const {
  if (o.n() != n()) throw ShapeError("SignedPermutation::compose: dimension mismatch");
  std::vector<std::size_t> s(n());
  std::vector<int> e(n());
  for (std::size_t j = 0; j < n(); ++j) s[j] = sigma_[o.sigma_[j]];
  for (std::size_t i = 0; i < n(); ++i) e[i] = eps_[i] * o.eps_[inv_[i]];
  return SignedPermutation(std::move(s), std::move(e));
}

ComplexMatrix SignedPermutation::left_apply(const ComplexMatrix& a) const {
  if (a.n() != n()) throw ShapeError("SignedPermutation::left_apply: dimension mismatch");
  ComplexMatrix r(n());
  for (std::size_t i = 0; i < n(); ++i) {
    const double e = eps_[i];
    const std::size_t src = inv_[i];
    for (std::size_t k = 0; k < n(); ++k) r(i, k) = e * a(src, k);
  }
  return r;
}

ComplexMatrix SignedPermutation::right_apply(const ComplexMatrix& a) const {
  if (a.n() != n()) throw ShapeError("SignedPermutation::right_apply: dimension mismatch");
  ComplexMatrix r(n());
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t k = 0; k < n(); ++k) r(i, k) = a(i, sigma_[k]) * static_cast<double>(eps_[sigma_[k]]);
  return r;
}

ComplexMatrix SignedPermutation::conjugate(const ComplexMatrix& a) const {
  if (a.n() != n()) throw ShapeError("SignedPermutation::conjugate: dimension mismatch");
  ComplexMatrix r(n());
  for (std::size_t i = 0; i < n(); ++i) {
    const std::size_t si = sigma_[i];
    const double ei = eps_[si];
    for (std::size_t k = 0; k < n(); ++k) r(i, k) = ei * a(si, sigma_[k]) * static_cast<double>(eps_[sigma_[k]]);
  }
  return r;
}

ComplexMatrix SignedPermutation::conjugate_adjoint(const ComplexMatrix& a) const {
  return inverse().conjugate(a);
}

SignedPermutation sample_signed_permutation(std::size_t n, SeededRng& rng) {
  if (n == 0) throw ValidationError("sample_signed_permutation: n must be positive");
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(s[i], s[rng.uniform_index(i + 1)]);
  std::vector<int> e(n);
  for (auto& x : e) x = rng.fair_sign();
  return SignedPermutation(std::move(s), std::move(e));
}

DiagonalSigns::DiagonalSigns(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int e : signs_)
    if (e != 1 && e != -1) throw ValidationError("DiagonalSigns: entries must be +1 or -1");
}

ComplexMatrix DiagonalSigns::dense() const {
  ComplexMatrix d(n());
  for (std::size_t i = 0; i < n(); ++i) d(i, i) = signs_[i];
  return d;
}

ComplexMatrix DiagonalSigns::left_apply(const ComplexMatrix& a) const {
  if (a.n() != n()) throw ShapeError("DiagonalSigns::left_apply: dimension mismatch");
  ComplexMatrix r = a;
  for (std::size_t i = 0; i < n(); ++i)
    if (signs_[i] < 0)
      for (std::size_t k = 0; k < n(); ++k) r(i, k) = -r(i, k);
  return r;
}

DiagonalSigns sample_diagonal_signs(std::size_t n, SeededRng& rng) {
  std::vector<int> e(n);
  for (auto& x : e) x = rng.fair_sign();
  return DiagonalSigns(std::move(e));
}

HadamardMatrix::HadamardMatrix(ComplexMatrix h) : h_(std::move(h)) {
  if (!is_complex_hadamard(h_)) throw ValidationError("matrix is not a complex Hadamard matrix");
  u_ = h_ * cplx(1.0 / std::sqrt(static_cast<double>(h_.n())));
}

ComplexMatrix fake_haar(const HadamardMatrix& h, const SignedPermutation& w) {
  if (h.n() != w.n()) throw ShapeError("fake_haar: dimension mismatch");
  return w.conjugate(h.normalized());
}

ComplexMatrix fake_haar(const ComplexMatrix& h, const SignedPermutation& w) {
  return fake_haar(HadamardMatrix(h), w);
}

LiberatingFamily::LiberatingFamily(std::vector<std::string> labels, std::vector<ComplexMatrix> members)
    : labels_(std::move(labels)), members_(std::move(members)) {
  if (labels_.size() != members_.size()) throw ValidationError("LiberatingFamily: label count mismatch");
  for (const auto& m : members_) {
    if (m.n() != members_.front().n()) throw ValidationError("LiberatingFamily: dimension mismatch");
    if (unitarity_defect(m) > kTolerances.unitary)
      throw ValidationError("LiberatingFamily: member is not unitary");
  }
}

LiberatingFamily::LiberatingFamily(Trusted, std::vector<std::string> labels, std::vector<ComplexMatrix> members)
    : labels_(std::move(labels)), members_(std::move(members)) {}

LiberatingFamily assemble_liberating_family(const HadamardMatrix& h, const SignedPermutation& w,
                                            const std::vector<DiagonalSigns>& ds) {
  if (h.n() != w.n()) throw ShapeError("liberating_family: dimension mismatch");
  std::vector<std::string> labels{"W", "HW"};
  std::vector<ComplexMatrix> members;
  members.push_back(w.dense());
  members.push_back(w.right_apply(h.normalized()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    labels.push_back("D" + std::to_string(i + 1) + "HW");
    members.push_back(ds[i].left_apply(members[1]));
  }
  return LiberatingFamily(LiberatingFamily::Trusted{}, std::move(labels), std::move(members));
}

LiberatingFamily liberating_family(const HadamardMatrix& h, std::size_t index_count, SeededRng& rng) {
  SignedPermutation w = sample_signed_permutation(h.n(), rng);
  std::vector<DiagonalSigns> ds;
  for (std::size_t i = 0; i < index_count; ++i) ds.push_back(sample_diagonal_signs(h.n(), rng));
  return assemble_liberating_family(h, w, ds);
}

ComplexMatrix SignedTransposition::dense(std::size_t n) const { return as_signed_permutation(n).dense(); }

SignedPermutation SignedTransposition::as_signed_permutation(std::size_t n) const {
  if (j >= n || k >= n) throw ValidationError("SignedTransposition: index out of range");
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  std::vector<int> e(n, 1);
  if (j == k) {
    e[j] = eps1;
  } else {
    s[k] = j;
    s[j] = k;
    e[j] = eps1;
    e[k] = eps2;
  }
  return SignedPermutation(std::move(s), std::move(e));
}

SignedTransposition sample_signed_transposition_indices(std::size_t n, SeededRng& rng) {
  if (n == 0) throw ValidationError("sample_signed_transposition: n must be positive");
  SignedTransposition t;
  t.j = rng.uniform_index(n);
  t.k = rng.uniform_index(n);
  t.eps1 = rng.fair_sign();
  t.eps2 = rng.fair_sign();
  return t;
}

ComplexMatrix sample_signed_transposition(std::size_t n, SeededRng& rng) {
  return sample_signed_transposition_indices(n, rng).dense(n);
}

ComplexMatrix sample_haar_unitary(std::size_t n, SeededRng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(m, m);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) z(i, j) = cplx(s * rng.standard_normal(), s * rng.standard_normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  ComplexMatrix u(n);
  for (Eigen::Index j = 0; j < m; ++j) {
    cplx d = r(j, j);
    cplx phase = std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
    for (Eigen::Index i = 0; i < m; ++i)
      u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = q(i, j) * phase;
  }
  return u;
}

EntryMomentResult entry_moment_statistic(const FamilySampler& sampler, std::size_t i, std::size_t j,
                                         int ell, std::size_t trials, const SeededRng& rng) {
  if (ell != 2 && ell != 4 && ell != 6 && ell != 8)
    throw ValidationError("entry_moment_statistic: ell must be 2, 4, 6 or 8");
  if (trials < 100) throw ValidationError("entry_moment_statistic: need at least 100 trials");
  if (i == j) throw ValidationError("entry_moment_statistic: needs two distinct family members");

  constexpr std::size_t kFixed = 4, kRandom = 4;
  struct Trial {
    std::size_t n = 0;
    std::array<double, kFixed> fixed{};
    double random = 0.0;
  };

  auto one = [&](std::size_t t) {
    SeededRng local = rng.derive(t);
    LiberatingFamily fam = sampler(local);
    if (fam.size() < 2) throw ValidationError("entry_moment_statistic: family has fewer than 2 members");
    if (i >= fam.size() || j >= fam.size()) throw ValidationError("entry_moment_statistic: member index out of range");
    const ComplexMatrix& ui = fam[i];
    const ComplexMatrix& uj = fam[j];
    const std::size_t n = fam.n();
    // (U_i* U_j)(a,b) = sum_k conj(U_i(k,a)) U_j(k,b)
    auto entry = [&](std::size_t a, std::size_t b) {
      cplx s{};
      for (std::size_t k = 0; k < n; ++k) s += std::conj(ui(k, a)) * uj(k, b);
      return std::pow(std::abs(s), ell);
    };
    const std::size_t h = n / 2 == 0 ? 0 : n / 2 - 1;
    const std::array<std::pair<std::size_t, std::size_t>, kFixed> pos{
        {{0, 0}, {0, h}, {h, h}, {n - 1, n - 1}}};
    Trial r;
    r.n = n;
    for (std::size_t p = 0; p < kFixed; ++p) r.fixed[p] = entry(pos[p].first, pos[p].second);
    for (std::size_t p = 0; p < kRandom; ++p) {
      std::size_t a = local.uniform_index(n), b = local.uniform_index(n);
      r.random += entry(a, b) / static_cast<double>(kRandom);
    }
    return r;
  };
  auto rows = parallel_map(trials, one);

  const double n = static_cast<double>(rows.front().n);
  const std::size_t h = rows.front().n / 2 == 0 ? 0 : rows.front().n / 2 - 1;
  const std::size_t last = rows.front().n - 1;
  const std::array<std::string, kFixed + 1> names{
      "(0,0)", "(0," + std::to_string(h) + ")", "(" + std::to_string(h) + "," + std::to_string(h) + ")",
      "(" + std::to_string(last) + "," + std::to_string(last) + ")", "random"};

  EntryMomentResult out;
  for (std::size_t p = 0; p <= kFixed; ++p) {
    std::vector<double> xs(trials);
    for (std::size_t t = 0; t < trials; ++t) xs[t] = p < kFixed ? rows[t].fixed[p] : rows[t].random;
    MeanEstimate m = mean_and_se(xs);
    EntryMomentProbe probe;
    probe.name = names[p];
    const double inv = 1.0 / static_cast<double>(ell);
    probe.value = std::sqrt(n) * std::pow(m.mean, inv);
    // Delta method for m -> sqrt(N) m^{1/ell}.
    probe.se = m.mean > 0 ? std::sqrt(n) * inv * std::pow(m.mean, inv - 1.0) * m.se : 0.0;
    if (p == 0 || probe.value > out.value) {
      out.value = probe.value;
      out.se = probe.se;
    }
    out.probes.push_back(std::move(probe));
  }
  return out;
}

}  // namespace liblab
