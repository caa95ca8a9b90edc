#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "liblab/errors.hpp"
#include "liblab/partitions.hpp"
#include "liblab/stats.hpp"

using namespace liblab;

namespace {

using Blocks = std::vector<std::vector<std::size_t>>;

// Exact E prod_m (phi_{t[2m]} phi_{t[2m+1]} - delta_m) by summing over every assignment of the
// two Fibonacci values to the distinct indices.
double fibonacci_weight_oracle(const std::vector<std::size_t>& t) {
  const double s5 = std::sqrt(5.0);
  const double up = (1 + s5) / 2, dn = (1 - s5) / 2;
  const double pu = (s5 - 1) / (2 * s5), pd = 1 - pu;
  std::vector<std::size_t> ids(t.begin(), t.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  double total = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << ids.size()); ++mask) {
    double prob = 1;
    std::map<std::size_t, double> phi;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      bool u = mask >> k & 1;
      phi[ids[k]] = u ? up : dn;
      prob *= u ? pu : pd;
    }
    double prod = 1;
    for (std::size_t m = 0; 2 * m < t.size(); ++m)
      prod *= phi[t[2 * m]] * phi[t[2 * m + 1]] - (t[2 * m] == t[2 * m + 1] ? 1.0 : 0.0);
    total += prob * prod;
  }
  return total;
}

std::size_t bell(std::size_t n) {
  // Bell triangle
  std::vector<std::size_t> row{1};
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t x : row) next.push_back(next.back() + x);
    row = next;
  }
  return row.back();
}

}  // namespace

TEST(SetPartitionTest, Construction) {
  EXPECT_THROW(SetPartition::from_rgs({1, 0}), ValidationError);
  EXPECT_THROW(SetPartition::from_rgs({0, 2}), ValidationError);
  EXPECT_THROW(SetPartition::from_blocks(3, {{0, 1}}), ValidationError);
  EXPECT_THROW(SetPartition::from_blocks(3, {{0, 1}, {1, 2}}), ValidationError);
  EXPECT_THROW(SetPartition::from_blocks(2, {{0, 1}, {}}), ValidationError);
  auto p = SetPartition::from_blocks(4, {{3, 1}, {0, 2}});
  EXPECT_EQ(p.rgs(), (std::vector<std::uint8_t>{0, 1, 0, 1}));
  EXPECT_EQ(p.blocks(), (Blocks{{0, 2}, {1, 3}}));
  EXPECT_EQ(p.block_sizes(), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(SetPartition::finest(3).block_count(), 3u);
  EXPECT_EQ(SetPartition::coarsest(3).block_count(), 1u);
}

TEST(PartitionOfTupleTest, Examples) {
  // (1,2,3,3,2,2,2,4) in 1-based labels
  std::vector<std::size_t> t{1, 2, 3, 3, 2, 2, 2, 4};
  EXPECT_EQ(partition_of_tuple(t).blocks(), (Blocks{{0}, {1, 4, 5, 6}, {2, 3}, {7}}));
  std::vector<std::size_t> u{5, 5}, v{1, 2, 1, 2};
  EXPECT_EQ(partition_of_tuple(u), SetPartition::coarsest(2));
  EXPECT_EQ(partition_of_tuple(v).blocks(), (Blocks{{0, 2}, {1, 3}}));
}

TEST(RefinesTest, Examples) {
  for (const auto& p : all_partitions(4)) EXPECT_TRUE(refines(SetPartition::finest(4), p));
  EXPECT_FALSE(refines(SetPartition::from_blocks(3, {{0, 1}, {2}}), SetPartition::finest(3)));
  EXPECT_TRUE(refines(SetPartition::from_blocks(4, {{0, 1}, {2, 3}}), SetPartition::coarsest(4)));
  EXPECT_THROW(refines(SetPartition::finest(3), SetPartition::finest(4)), ValidationError);
}

TEST(AllPartitionsTest, BellNumbersAndOrder) {
  for (std::size_t ell = 1; ell <= 10; ++ell) {
    auto ps = all_partitions(ell);
    EXPECT_EQ(ps.size(), bell(ell)) << ell;
    EXPECT_TRUE(std::is_sorted(ps.begin(), ps.end()));
    EXPECT_EQ(std::set<SetPartition>(ps.begin(), ps.end()).size(), ps.size());
    if (ell <= 8) EXPECT_LE(static_cast<double>(ps.size()), std::pow(double(ell), double(ell)));
  }
  EXPECT_EQ(all_partitions(3).size(), 5u);
  EXPECT_EQ(all_partitions(4).size(), 15u);
  EXPECT_THROW(all_partitions(11), CapacityError);
}

TEST(MobiusTest, Examples) {
  EXPECT_EQ(mobius_zero(SetPartition::finest(5)), 1);
  EXPECT_EQ(mobius_zero(SetPartition::coarsest(3)), 2);
  EXPECT_EQ(mobius_zero(SetPartition::from_blocks(4, {{0, 1}, {2, 3}})), 1);
  EXPECT_EQ(mobius_zero(SetPartition::coarsest(5)), 24);
  EXPECT_EQ(mobius_zero(SetPartition::coarsest(4)), -6);
}

TEST(MobiusTest, InversionHolds) {
  const std::size_t bells[] = {0, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (std::size_t ell = 1; ell <= 8; ++ell) {
    auto c = mobius_inversion_check(ell);
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.partitions_checked, bells[ell]);
    std::int64_t worst = 0;
    for (const auto& p : all_partitions(ell)) worst = std::max(worst, std::abs(mobius_zero(p)));
    EXPECT_LE(static_cast<double>(worst), std::pow(double(ell), double(ell)));
  }
  EXPECT_THROW(mobius_inversion_check(9), CapacityError);
}

TEST(MobiusTest, CorruptedFunctionIsCaught) {
  auto c = mobius_inversion_check(3, [](const SetPartition& p) { return mobius_zero(p) + (p.block_count() == 2); });
  EXPECT_FALSE(c.holds);
  ASSERT_TRUE(c.first_failure.has_value());
  // ell = 1 has no two-block partitions
  EXPECT_TRUE(mobius_inversion_check(1, [](const SetPartition& p) { return mobius_zero(p) + (p.block_count() == 2); }).holds);
}

TEST(PartChiTest, Examples) {
  std::size_t count = 0;
  for (const auto& p : all_partitions(2)) count += in_part_chichi(p);
  EXPECT_EQ(count, 0u);
  EXPECT_TRUE(in_part_chichi(SetPartition::from_blocks(4, {{0, 2}, {1, 3}})));
  EXPECT_FALSE(in_part_chichi(SetPartition::from_blocks(4, {{0, 1}, {2, 3}})));
  std::set<SetPartition> found;
  for (const auto& p : all_partitions(4))
    if (in_part_chichi(p)) found.insert(p);
  EXPECT_EQ(found, (std::set<SetPartition>{SetPartition::coarsest(4), SetPartition::from_blocks(4, {{0, 2}, {1, 3}}),
                                           SetPartition::from_blocks(4, {{0, 3}, {1, 2}})}));
  EXPECT_FALSE(in_part_chi(SetPartition::from_blocks(3, {{0, 1}, {2}})));
  EXPECT_THROW(in_part_chichi(SetPartition::coarsest(3)), ValidationError);
}

TEST(ClumpTest, Examples) {
  EXPECT_TRUE(clump(SetPartition::from_blocks(4, {{0, 1}, {2, 3}})).empty());
  EXPECT_EQ(clump(SetPartition::from_blocks(4, {{0, 2}, {1, 3}})), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(clump(SetPartition::from_blocks(6, {{0, 1, 2, 3}, {4, 5}})), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(clump(SetPartition::coarsest(3)), ValidationError);
  std::vector<std::size_t> b{2, 3}, c{1, 2};
  EXPECT_TRUE(is_forbidden_doubleton(b));
  EXPECT_FALSE(is_forbidden_doubleton(c));
}

TEST(ClumpTest, ChiChiCharacterization) {
  for (std::size_t ell2 : {2u, 4u, 6u, 8u})
    for (const auto& p : all_partitions(ell2)) {
      bool full = clump(p).size() == ell2;
      EXPECT_EQ(in_part_chichi(p), in_part_chi(p) && full);
    }
}

TEST(ClumpEquivalentTest, Examples) {
  std::vector<std::size_t> s{1, 1, 2, 2}, t{3, 3, 2, 2}, u{1, 2, 1, 2}, v{1, 2, 1, 3}, w{1, 2, 1, 2};
  EXPECT_TRUE(clump_equivalent(s, s));
  EXPECT_TRUE(clump_equivalent(s, t));
  EXPECT_FALSE(clump_equivalent(u, v));
  EXPECT_TRUE(clump_equivalent(u, w));
  std::vector<std::size_t> x{2, 1, 2, 1};
  EXPECT_FALSE(clump_equivalent(u, x));  // same partition, clump is everything, values differ
  std::vector<std::size_t> odd{1, 2, 3};
  EXPECT_THROW(clump_equivalent(odd, odd), ValidationError);
  EXPECT_THROW(clump_equivalent(s, std::vector<std::size_t>{1, 1}), ValidationError);
}

TEST(ForEachTupleTest, Order) {
  std::vector<std::vector<std::size_t>> seen;
  for_each_tuple(2, 2, [&](std::span<const std::size_t> t) { seen.emplace_back(t.begin(), t.end()); });
  EXPECT_EQ(seen, (std::vector<std::vector<std::size_t>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(IndexTableTest, Capacity) {
  EXPECT_THROW(IndexTable(10, 8), CapacityError);
  IndexTable t(3, 2);
  std::vector<std::size_t> idx{2, 1};
  t[idx] = 5.0;
  EXPECT_EQ(t.flat_index(idx), 7u);
  EXPECT_EQ(t.max_abs(), 5.0);
}

TEST(ChiChiTableTest, Examples) {
  for (std::size_t n : {3u, 6u}) {
    IndexTable zero(n, 2);
    EXPECT_TRUE(chichi_table_check(zero).passed());
  }
  for (auto [n, ell] : {std::pair<std::size_t, std::size_t>{4, 2}, {12, 2}, {6, 1}}) {
    IndexTable f(n, 2 * ell);
    for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> t) { f[t] = in_part_chichi(partition_of_tuple(t)) ? 1.0 : 0.0; });
    ChiChiCheck c = chichi_table_check(f);
    EXPECT_TRUE(c.passed()) << n;
    EXPECT_EQ(c.clump_constant.has_value(), n >= 6 * ell);

    IndexTable g(n, 2 * ell);
    for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> t) { g[t] = static_cast<double>(t[0] + 1); });
    EXPECT_FALSE(chichi_table_check(g).passed());
  }
}

TEST(ChiChiTableTest, ClumpViolationCaught) {
  // Supported on (i,i,j,j), i != j, but remembers the order of the two spare values.
  const std::size_t n = 12, ell = 2;
  IndexTable f(n, 2 * ell);
  for_each_tuple(n, 2 * ell, [&](std::span<const std::size_t> t) {
    if (t[0] == t[1] && t[2] == t[3] && t[0] != t[2]) f[t] = t[0] < t[2] ? 2.0 : 1.0;
  });
  ChiChiCheck c = chichi_table_check(f);
  EXPECT_TRUE(c.chi_class);
  EXPECT_FALSE(c.chichi_definition);
  ASSERT_TRUE(c.clump_constant.has_value());
  EXPECT_FALSE(*c.clump_constant);
  EXPECT_FALSE(c.passed());
}

TEST(FibonacciTest, Moments) {
  EXPECT_EQ(fibonacci_moment(0), 1);
  EXPECT_EQ(fibonacci_moment(1), 0);
  EXPECT_EQ(fibonacci_moment(2), 1);
  EXPECT_EQ(fibonacci_moment(7), 8);
  EXPECT_EQ(fibonacci_moment(40), 63245986);
  EXPECT_THROW(fibonacci_moment(41), CapacityError);
  const double s5 = std::sqrt(5.0), up = (1 + s5) / 2, dn = (1 - s5) / 2, pu = (s5 - 1) / (2 * s5);
  for (unsigned k = 0; k <= 20; ++k)
    EXPECT_NEAR(pu * std::pow(up, k) + (1 - pu) * std::pow(dn, k), double(fibonacci_moment(k)),
                1e-9 * std::max(1.0, double(fibonacci_moment(k))));
}

TEST(FibonacciTest, Sampler) {
  SeededRng g(1);
  const int m = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < m; ++i) {
    double x = sample_fibonacci(g);
    ASSERT_NEAR(x * x, x + 1, 1e-12);
    s += x;
    s2 += x * x;
  }
  EXPECT_LT(std::abs(s / m), 0.02);
  EXPECT_NEAR(s2 / m, 1.0, 0.02);
}

TEST(FibonacciWeightTest, Examples) {
  std::vector<std::size_t> a{1, 1, 2, 2}, b{1, 2, 1, 2};
  EXPECT_EQ(fibonacci_weight(a), 0);
  EXPECT_EQ(fibonacci_weight(b), 1);
  EXPECT_THROW(fibonacci_weight(std::vector<std::size_t>{1, 2, 3}), ValidationError);
  EXPECT_THROW(fibonacci_weight(std::vector<std::size_t>(18, 0)), CapacityError);
}

TEST(FibonacciWeightTest, ExhaustiveAgainstExactAndMonteCarlo) {
  SeededRng g(2);
  const int draws = 3000;
  std::size_t tuples = 0;
  for (std::size_t ell = 1; ell <= 3; ++ell)
    for_each_tuple(4, 2 * ell, [&](std::span<const std::size_t> t) {
      ++tuples;
      std::vector<std::size_t> tv(t.begin(), t.end());
      const std::int64_t w = fibonacci_weight(t);
      EXPECT_NEAR(double(w), fibonacci_weight_oracle(tv), 1e-9);
      EXPECT_GE(w, 0);
      if (in_part_chichi(partition_of_tuple(t))) EXPECT_GE(w, 1);
      if (ell <= 2 || tuples % 17 == 0) {
        std::vector<double> xs(draws);
        for (int d = 0; d < draws; ++d) {
          double phi[4];
          for (double& p : phi) p = sample_fibonacci(g);
          double prod = 1;
          for (std::size_t m = 0; m < ell; ++m) prod *= phi[tv[2 * m]] * phi[tv[2 * m + 1]] - (tv[2 * m] == tv[2 * m + 1]);
          xs[d] = prod;
        }
        auto est = mean_and_se(xs);
        EXPECT_LE(std::abs(est.mean - double(w)), 5 * est.se + 1e-9);
      }
    });
  EXPECT_EQ(tuples, 16u + 256u + 4096u);
}

TEST(BlockProductSumTest, MatchesRestrictedSum) {
  SeededRng g(3);
  for (std::size_t ell = 1; ell <= 4; ++ell)
    for (std::size_t n : {1u, 3u, 5u}) {
      std::vector<std::vector<cplx>> f(ell, std::vector<cplx>(n));
      for (auto& row : f)
        for (auto& z : row) z = cplx(g.standard_normal(), g.standard_normal());
      for (const auto& p : all_partitions(ell)) {
        cplx brute{};
        for_each_tuple(n, ell, [&](std::span<const std::size_t> t) {
          if (!refines(p, partition_of_tuple(t))) return;
          cplx prod = 1;
          for (std::size_t b = 0; b < ell; ++b) prod *= f[b][t[b]];
          brute += prod;
        });
        EXPECT_LT(std::abs(block_product_sum(f, p) - brute), 1e-10 * std::max(1.0, std::abs(brute)));
      }
      if (n > 1) {
        std::vector<bool> excluded(n, false);
        excluded[0] = true;
        cplx brute{};
        const SetPartition p = SetPartition::finest(ell);
        for_each_tuple(n, ell, [&](std::span<const std::size_t> t) {
          if (std::count(t.begin(), t.end(), std::size_t{0})) return;
          cplx prod = 1;
          for (std::size_t b = 0; b < ell; ++b) prod *= f[b][t[b]];
          brute += prod;
        });
        EXPECT_LT(std::abs(block_product_sum(f, p, excluded) - brute), 1e-10 * std::max(1.0, std::abs(brute)));
      }
    }
}
