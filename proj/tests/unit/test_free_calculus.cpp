#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "liblab/errors.hpp"
#include "liblab/free_calculus.hpp"
#include "liblab/partitions.hpp"

using namespace liblab;

namespace {

// Oracle: free cumulants and noncrossing partitions, kept apart from the library's
// centering recursion.

bool noncrossing(const std::vector<std::size_t>& block_of) {
  const std::size_t n = block_of.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d)
          if (block_of[a] == block_of[c] && block_of[b] == block_of[d] && block_of[a] != block_of[b]) return false;
  return true;
}

std::vector<std::size_t> as_labels(const SetPartition& p) { return {p.rgs().begin(), p.rgs().end()}; }

std::vector<SetPartition> nc_partitions(std::size_t n) {
  std::vector<SetPartition> out;
  for (const auto& p : all_partitions(n))
    if (noncrossing(as_labels(p))) out.push_back(p);
  return out;
}

// Kreweras complement: the noncrossing partition of the primed points with n + 1 - |p| blocks
// whose interleaving with p stays noncrossing.
SetPartition kreweras(const SetPartition& p) {
  const std::size_t n = p.ell();
  for (const auto& q : nc_partitions(n)) {
    if (q.block_count() + p.block_count() != n + 1) continue;
    std::vector<std::size_t> joint(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      joint[2 * i] = p.block_of(i);
      joint[2 * i + 1] = n + q.block_of(i);
    }
    if (noncrossing(joint)) return q;
  }
  throw std::logic_error("no complement");
}

// kappa_n from m_n = sum_{pi in NC(n)} prod kappa_|B|
std::vector<double> free_cumulants(const std::vector<double>& m, std::size_t order) {
  std::vector<double> kappa(order + 1, 0.0);
  for (std::size_t n = 1; n <= order; ++n) {
    double rest = 0;
    for (const auto& p : nc_partitions(n)) {
      if (p.block_count() == 1) continue;
      double prod = 1;
      for (std::size_t s : p.block_sizes()) prod *= kappa[s];
      rest += prod;
    }
    kappa[n] = m[n] - rest;
  }
  return kappa;
}

std::vector<double> with_m0(const MomentSequence& s) {
  std::vector<double> m{1.0};
  m.insert(m.end(), s.moments().begin(), s.moments().end());
  return m;
}

std::vector<double> oracle_additive(const MomentSequence& a, const MomentSequence& b, std::size_t k) {
  auto ka = free_cumulants(with_m0(a), k), kb = free_cumulants(with_m0(b), k);
  std::vector<double> out;
  for (std::size_t n = 1; n <= k; ++n) {
    double m = 0;
    for (const auto& p : nc_partitions(n)) {
      double prod = 1;
      for (std::size_t s : p.block_sizes()) prod *= ka[s] + kb[s];
      m += prod;
    }
    out.push_back(m);
  }
  return out;
}

// phi((ab)^n) = sum_{pi in NC(n)} kappa_pi[a] m_{K(pi)}[b]
std::vector<double> oracle_multiplicative(const MomentSequence& a, const MomentSequence& b, std::size_t k) {
  auto ka = free_cumulants(with_m0(a), k);
  auto mb = with_m0(b);
  std::vector<double> out;
  for (std::size_t n = 1; n <= k; ++n) {
    double m = 0;
    for (const auto& p : nc_partitions(n)) {
      double prod = 1;
      for (std::size_t s : p.block_sizes()) prod *= ka[s];
      for (std::size_t s : kreweras(p).block_sizes()) prod *= mb[s];
      m += prod;
    }
    out.push_back(m);
  }
  return out;
}

double binom(unsigned n, unsigned k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

MomentSequence uniform01(std::size_t order) {
  std::vector<double> m;
  for (std::size_t k = 1; k <= order; ++k) m.push_back(1.0 / double(k + 1));
  return MomentSequence(m);
}

MomentSequence semicircle(std::size_t order) {
  std::vector<double> m;
  for (std::size_t k = 1; k <= order; ++k) m.push_back(k % 2 ? 0.0 : binom(unsigned(k), unsigned(k / 2)) / double(k / 2 + 1));
  return MomentSequence(m);
}

}  // namespace

TEST(OracleSelfCheck, CatalanAndKreweras) {
  const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(nc_partitions(n).size(), catalan[n]);
  EXPECT_EQ(kreweras(SetPartition::finest(4)), SetPartition::coarsest(4));
  // semicircle has kappa_2 = 1 and nothing else
  auto k = free_cumulants(with_m0(semicircle(8)), 8);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_NEAR(k[n], n == 2 ? 1.0 : 0.0, 1e-12);
}

TEST(MomentSequenceTest, Basics) {
  auto b = MomentSequence::bernoulli(0.3, 4);
  EXPECT_EQ(b[0], 1.0);
  EXPECT_EQ(b[3], 0.3);
  EXPECT_THROW(b[5], ValidationError);
  EXPECT_THROW(MomentSequence::bernoulli(1.5, 2), ValidationError);
  EXPECT_EQ(MomentSequence::symmetric_bernoulli(4).moments(), (std::vector<double>{0, 1, 0, 1}));
  EXPECT_EQ(MomentSequence::point_mass(2.0, 3).moments(), (std::vector<double>{2, 4, 8}));
  EXPECT_TRUE(semicircle(12).hankel_consistent());
  EXPECT_TRUE(uniform01(12).supported_on_nonnegative());
  EXPECT_FALSE(MomentSequence::symmetric_bernoulli(6).supported_on_nonnegative());
  // variance -1
  EXPECT_FALSE(MomentSequence({0.0, -1.0}).hankel_consistent());
}

TEST(FreeMixedMomentTest, Examples) {
  std::map<std::string, MomentSequence> m{{"a", MomentSequence({0.7, 2.0})}, {"b", MomentSequence({-0.4, 1.0})}};
  EXPECT_DOUBLE_EQ(free_mixed_moment(m, {"a"}), 0.7);
  EXPECT_NEAR(free_mixed_moment(m, {"a", "b"}), 0.7 * -0.4, 1e-15);
  EXPECT_THROW(free_mixed_moment(m, {"c"}), ValidationError);
  EXPECT_THROW(free_mixed_moment(m, {"a", "a", "a"}), ValidationError);
  std::vector<MomentSequence> v{MomentSequence::symmetric_bernoulli(4), MomentSequence::symmetric_bernoulli(4)};
  // phi(abab) for centered unit-variance free variables
  EXPECT_NEAR(free_mixed_moment(v, {{0, 1}, {1, 1}, {0, 1}, {1, 1}}), 0.0, 1e-15);
  EXPECT_NEAR(free_mixed_moment(v, {{0, 1}, {0, 1}, {1, 2}}), 1.0, 1e-15);
  EXPECT_THROW(free_mixed_moment(v, AlternatingWord(21, Letter{0, 1})), CapacityError);
}

TEST(FreeMixedMomentTest, CenteredAlternatingVanishes) {
  // Centering by hand: a^p - phi(a^p) is expressed as the word a^p minus its constant.
  std::vector<MomentSequence> v{uniform01(12), semicircle(12), MomentSequence::bernoulli(0.3, 12)};
  const std::vector<std::vector<Letter>> words{
      {{0, 2}, {1, 1}}, {{0, 1}, {1, 2}, {2, 1}}, {{0, 1}, {1, 1}, {0, 2}, {2, 3}}, {{1, 2}, {0, 1}, {1, 2}, {0, 3}}};
  for (const auto& w : words) {
    // expand prod (x_i - c_i) over subsets
    double total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << w.size()); ++mask) {
      AlternatingWord kept;
      double coef = 1;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (mask >> i & 1)
          kept.push_back(w[i]);
        else
          coef *= -v[w[i].label][w[i].power];
      }
      total += coef * (kept.empty() ? 1.0 : free_mixed_moment(v, kept));
    }
    EXPECT_NEAR(total, 0.0, 1e-12);
  }
}

TEST(FreeMixedMomentTest, Traciality) {
  std::vector<MomentSequence> v{uniform01(16), MomentSequence({0.3, 1.2, 0.5, 2.0, 1.1, 3.0, 2.5, 6.0})};
  for (std::size_t len = 2; len <= 8; ++len)
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
      AlternatingWord w;
      for (std::size_t i = 0; i < len; ++i) w.push_back({mask >> i & 1, 1});
      const double base = free_mixed_moment(v, w);
      AlternatingWord s = w;
      std::rotate(s.begin(), s.begin() + 1, s.end());
      EXPECT_NEAR(free_mixed_moment(v, s), base, 1e-10 * std::max(1.0, std::abs(base)));
    }
}

TEST(FreeAdditiveTest, Examples) {
  auto sb = MomentSequence::symmetric_bernoulli(12);
  auto out = free_additive_moments(sb, sb, 12);
  const std::vector<double> arcsine{0, 2, 0, 6, 0, 20, 0, 70, 0, 252, 0, 924};
  for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(out.moments()[k], arcsine[k], 1e-9 * std::max(1.0, arcsine[k]));
  auto a = uniform01(8);
  EXPECT_EQ(free_additive_moments(a, MomentSequence(std::vector<double>(8, 0.0)), 8).moments(), a.moments());
  EXPECT_THROW(free_additive_moments(sb, sb, 13), CapacityError);
  EXPECT_THROW(free_additive_moments(a, a, 9), ValidationError);
}

TEST(FreeAdditiveTest, MatchesCumulantOracleAndCommutes) {
  const std::vector<std::pair<MomentSequence, MomentSequence>> pairs{
      {uniform01(8), semicircle(8)},
      {MomentSequence::bernoulli(0.3, 8), MomentSequence::symmetric_bernoulli(8)},
      {MomentSequence::point_mass(1.5, 8), uniform01(8)}};
  for (const auto& [a, b] : pairs) {
    auto got = free_additive_moments(a, b, 8);
    auto want = oracle_additive(a, b, 8);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(got.moments()[k], want[k], 1e-9 * std::max(1.0, std::abs(want[k])));
    EXPECT_EQ(free_additive_moments(b, a, 8), got);
    EXPECT_NEAR(got.moments()[0], a[1] + b[1], 1e-14);
  }
}

TEST(FreeMultiplicativeTest, Examples) {
  auto p = MomentSequence::bernoulli(0.5, 10);
  auto out = free_multiplicative_moments(p, p, 6);
  EXPECT_NEAR(out[1], 0.25, 1e-14);
  EXPECT_NEAR(out[2], 3.0 / 16.0, 1e-14);
  auto b = uniform01(10);
  auto id = free_multiplicative_moments(MomentSequence::point_mass(1.0, 10), b, 10);
  for (std::size_t k = 1; k <= 10; ++k) EXPECT_NEAR(id[k], b[k], 1e-12);
  EXPECT_THROW(free_multiplicative_moments(MomentSequence::symmetric_bernoulli(4), b, 4), ValidationError);
  EXPECT_THROW(free_multiplicative_moments(p, p, 11), CapacityError);
}

TEST(FreeMultiplicativeTest, MatchesKrewerasOracle) {
  const std::vector<std::pair<MomentSequence, MomentSequence>> pairs{
      {uniform01(6), MomentSequence::bernoulli(0.3, 6)},
      {MomentSequence::bernoulli(0.7, 6), semicircle(6)},
      {MomentSequence::bernoulli(0.4, 6), MomentSequence::bernoulli(0.6, 6)}};
  for (const auto& [a, b] : pairs) {
    auto got = free_multiplicative_moments(a, b, 6);
    auto want = oracle_multiplicative(a, b, 6);
    for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(got.moments()[k], want[k], 1e-10 * std::max(1.0, std::abs(want[k])));
  }
}

TEST(CompressionLawTest, Examples) {
  auto law = compression_law(0.5, 0.5);
  EXPECT_DOUBLE_EQ(law.atom0, 0.5);
  EXPECT_DOUBLE_EQ(law.atom1, 0.0);
  EXPECT_NEAR(law.lambda_minus, 0.0, 1e-15);
  EXPECT_NEAR(law.lambda_plus, 1.0, 1e-15);
  for (double x : {0.1, 0.37, 0.5, 0.9})
    EXPECT_NEAR(compression_density(law, x), 1 / (2 * std::numbers::pi * std::sqrt(x * (1 - x))), 1e-12);
  EXPECT_EQ(compression_density(law, -0.1), 0.0);
  EXPECT_EQ(compression_density(law, 1.2), 0.0);
  EXPECT_NEAR(compression_law(0.3, 0.9).atom1, 0.2, 1e-15);
  EXPECT_THROW(compression_law(0.0, 0.5), ValidationError);
  EXPECT_THROW(compression_law(0.5, 1.0), ValidationError);
}

TEST(CompressionLawTest, MassAndSupportOnGrid) {
  for (double a = 0.1; a < 0.95; a += 0.1)
    for (double b = 0.1; b < 0.95; b += 0.1) {
      auto law = compression_law(a, b);
      EXPECT_NEAR(law.atom0, 1 - std::min(a, b), 1e-15);
      EXPECT_NEAR(law.atom1, std::max(a + b - 1, 0.0), 1e-15);
      EXPECT_GE(law.lambda_minus, -1e-15);
      EXPECT_LE(law.lambda_minus, law.lambda_plus);
      EXPECT_LE(law.lambda_plus, 1 + 1e-15);
      EXPECT_NEAR(compression_total_mass(law), 1.0, 1e-8) << a << " " << b;
      EXPECT_NEAR(compression_interval_mass(law, -5, 5), compression_continuous_mass(law), 1e-10);
      EXPECT_NEAR(compression_interval_mass(law, 0, 0.5) + compression_interval_mass(law, 0.5, 1),
                  compression_continuous_mass(law), 1e-10);
    }
}

TEST(CompressionLawTest, ArcsineMoments) {
  auto m = law_moments_by_quadrature(compression_law(0.5, 0.5), 10);
  EXPECT_EQ(m[0], 1.0);
  EXPECT_NEAR(m[1], 0.25, 1e-7);
  EXPECT_NEAR(m[2], 0.1875, 1e-7);
  for (unsigned k = 1; k <= 10; ++k) EXPECT_NEAR(m[k], 0.5 * binom(2 * k, k) / std::pow(4.0, k), 1e-7);
  EXPECT_THROW(law_moments_by_quadrature(compression_law(0.5, 0.5), 11), CapacityError);
}

TEST(CompressionLawTest, AgreesWithFreeProduct) {
  for (double a : {0.3, 0.5, 0.7})
    for (double b : {0.3, 0.5, 0.7}) {
      auto q = law_moments_by_quadrature(compression_law(a, b), 6);
      auto f = free_multiplicative_moments(MomentSequence::bernoulli(a, 6), MomentSequence::bernoulli(b, 6), 6);
      for (std::size_t k = 1; k <= 6; ++k) EXPECT_NEAR(q[k], f[k], 1e-5) << a << " " << b << " k=" << k;
    }
}
