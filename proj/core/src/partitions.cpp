#include "liblab/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liblab/errors.hpp"

namespace liblab {

namespace {

void require_even(const SetPartition& p, const char* what) {
  if (p.ell() % 2 != 0) throw ValidationError(std::string(what) + ": ground set size must be even");
}

}  // namespace

SetPartition SetPartition::from_rgs(std::vector<std::uint8_t> rgs) {
  SetPartition p;
  std::size_t next = 0;
  for (std::uint8_t b : rgs) {
    if (b > next) throw ValidationError("SetPartition: not a restricted-growth string");
    if (b == next) ++next;
  }
  p.rgs_ = std::move(rgs);
  p.blocks_ = next;
  return p;
}

SetPartition SetPartition::from_blocks(std::size_t ell, const std::vector<std::vector<std::size_t>>& blocks) {
  if (ell > 255) throw CapacityError("SetPartition: ground set larger than 255");
  std::vector<int> owner(ell, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw ValidationError("SetPartition: empty block");
    for (std::size_t x : blocks[b]) {
      if (x >= ell) throw ValidationError("SetPartition: element outside ground set");
      if (owner[x] != -1) throw ValidationError("SetPartition: blocks overlap");
      owner[x] = static_cast<int>(b);
    }
  }
  std::vector<std::uint8_t> rgs(ell);
  std::vector<int> label(blocks.size(), -1);
  int next = 0;
  for (std::size_t x = 0; x < ell; ++x) {
    if (owner[x] == -1) throw ValidationError("SetPartition: blocks do not cover the ground set");
    int& l = label[static_cast<std::size_t>(owner[x])];
    if (l == -1) l = next++;
    rgs[x] = static_cast<std::uint8_t>(l);
  }
  return from_rgs(std::move(rgs));
}

SetPartition SetPartition::finest(std::size_t ell) {
  std::vector<std::uint8_t> r(ell);
  for (std::size_t x = 0; x < ell; ++x) r[x] = static_cast<std::uint8_t>(x);
  return from_rgs(std::move(r));
}

SetPartition SetPartition::coarsest(std::size_t ell) { return from_rgs(std::vector<std::uint8_t>(ell, 0)); }

std::vector<std::vector<std::size_t>> SetPartition::blocks() const {
  std::vector<std::vector<std::size_t>> out(blocks_);
  for (std::size_t x = 0; x < rgs_.size(); ++x) out[rgs_[x]].push_back(x);
  return out;
}

std::vector<std::size_t> SetPartition::block_sizes() const {
  std::vector<std::size_t> out(blocks_, 0);
  for (std::uint8_t b : rgs_) ++out[b];
  return out;
}

SetPartition partition_of_tuple(std::span<const std::size_t> t) {
  if (t.size() > 255) throw CapacityError("partition_of_tuple: tuple longer than 255");
  std::vector<std::uint8_t> rgs(t.size());
  std::vector<std::size_t> seen;
  for (std::size_t x = 0; x < t.size(); ++x) {
    auto it = std::find(seen.begin(), seen.end(), t[x]);
    if (it == seen.end()) {
      rgs[x] = static_cast<std::uint8_t>(seen.size());
      seen.push_back(t[x]);
    } else {
      rgs[x] = static_cast<std::uint8_t>(it - seen.begin());
    }
  }
  return SetPartition::from_rgs(std::move(rgs));
}

bool refines(const SetPartition& p, const SetPartition& q) {
  if (p.ell() != q.ell()) throw ValidationError("refines: ground sets differ");
  std::vector<int> target(p.block_count(), -1);
  for (std::size_t x = 0; x < p.ell(); ++x) {
    int& t = target[p.block_of(x)];
    if (t == -1) t = static_cast<int>(q.block_of(x));
    else if (t != static_cast<int>(q.block_of(x))) return false;
  }
  return true;
}

std::vector<SetPartition> all_partitions(std::size_t ell) {
  if (ell > 10) throw CapacityError("all_partitions: ell=" + std::to_string(ell) + " exceeds 10");
  std::vector<SetPartition> out;
  if (ell == 0) {
    out.push_back(SetPartition::from_rgs({}));
    return out;
  }
  std::vector<std::uint8_t> a(ell, 0);
  // prefix_max[x] = max(a[0..x])
  std::vector<std::uint8_t> prefix_max(ell, 0);
  for (;;) {
    out.push_back(SetPartition::from_rgs(a));
    // Increment the rightmost position that can grow.
    std::size_t x = ell - 1;
    while (x > 0 && a[x] > prefix_max[x - 1]) --x;
    if (x == 0) break;
    ++a[x];
    prefix_max[x] = std::max(prefix_max[x - 1], a[x]);
    for (std::size_t y = x + 1; y < ell; ++y) {
      a[y] = 0;
      prefix_max[y] = prefix_max[x];
    }
  }
  return out;
}

std::int64_t mobius_zero(const SetPartition& p) {
  std::int64_t r = 1;
  for (std::size_t s : p.block_sizes()) {
    std::int64_t f = 1;
    for (std::size_t k = 2; k < s; ++k) f *= static_cast<std::int64_t>(k);
    r *= (s % 2 == 1) ? f : -f;
  }
  return r;
}

MobiusCheck mobius_inversion_check(std::size_t ell, const MobiusFunction& mu) {
  if (ell > 8) throw CapacityError("mobius_inversion_check: ell=" + std::to_string(ell) + " exceeds 8");
  auto parts = all_partitions(ell);
  std::vector<std::int64_t> mu_values(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) mu_values[k] = mu ? mu(parts[k]) : mobius_zero(parts[k]);
  const SetPartition zero = SetPartition::finest(ell);
  MobiusCheck out;
  for (const auto& pi : parts) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < parts.size(); ++k)
      if (refines(parts[k], pi)) sum += mu_values[k];
    ++out.partitions_checked;
    if (sum != (pi == zero ? 1 : 0) && out.holds) {
      out.holds = false;
      out.first_failure = pi;
    }
  }
  return out;
}

bool in_part_chi(const SetPartition& p) {
  auto sizes = p.block_sizes();
  return std::none_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 1; });
}

bool is_forbidden_doubleton(std::span<const std::size_t> block) {
  return block.size() == 2 && block[0] % 2 == 0 && block[1] == block[0] + 1;
}

bool in_part_chichi(const SetPartition& p) {
  require_even(p, "in_part_chichi");
  if (!in_part_chi(p)) return false;
  for (const auto& b : p.blocks())
    if (is_forbidden_doubleton(b)) return false;
  return true;
}

std::vector<std::size_t> clump(const SetPartition& p) {
  require_even(p, "clump");
  std::vector<std::size_t> out;
  for (const auto& b : p.blocks())
    if (!is_forbidden_doubleton(b)) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool clump_equivalent(std::span<const std::size_t> s, std::span<const std::size_t> t) {
  if (s.size() != t.size()) throw ValidationError("clump_equivalent: tuple lengths differ");
  if (s.size() % 2 != 0) throw ValidationError("clump_equivalent: tuple length must be even");
  SetPartition ps = partition_of_tuple(s);
  if (ps != partition_of_tuple(t)) return false;
  for (std::size_t x : clump(ps))
    if (s[x] != t[x]) return false;
  return true;
}

void for_each_tuple(std::size_t n, std::size_t length,
                    const std::function<void(std::span<const std::size_t>)>& fn) {
  if (n == 0 && length > 0) return;
  std::vector<std::size_t> t(length, 0);
  for (;;) {
    fn(t);
    std::size_t x = length;
    while (x > 0) {
      --x;
      if (++t[x] < n) break;
      t[x] = 0;
      if (x == 0) return;
    }
    if (length == 0) return;
  }
}

IndexTable::IndexTable(std::size_t n, std::size_t length) : n_(n), len_(length) {
  double cells = std::pow(static_cast<double>(n), static_cast<double>(length));
  if (cells > static_cast<double>(kCapacity))
    throw CapacityError("IndexTable: " + std::to_string(n) + "^" + std::to_string(length) + " exceeds 1e7 cells");
  v_.assign(static_cast<std::size_t>(std::llround(cells)), cplx{});
}

std::size_t IndexTable::flat_index(std::span<const std::size_t> t) const {
  if (t.size() != len_) throw ShapeError("IndexTable: tuple length mismatch");
  std::size_t k = 0;
  for (std::size_t x : t) {
    if (x >= n_) throw ShapeError("IndexTable: index out of range");
    k = k * n_ + x;
  }
  return k;
}

double IndexTable::max_abs() const {
  double m = 0;
  for (const auto& z : v_) m = std::max(m, std::abs(z));
  return m;
}

ChiChiCheck chichi_table_check(const IndexTable& f, double tol) {
  if (f.length() % 2 != 0) throw ValidationError("chichi_table_check: table arity must be even");
  const std::size_t n = f.n(), len = f.length(), ell = len / 2;
  const double bound = tol * std::max(1.0, f.max_abs());
  ChiChiCheck out;
  if (n >= 6 * ell) out.clump_constant = true;

  std::vector<std::size_t> alt(len);
  std::vector<std::size_t> count(n);
  for_each_tuple(n, len, [&](std::span<const std::size_t> t) {
    const cplx value = f[t];
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t x : t) ++count[x];
    bool has_singleton = false;
    for (std::size_t x : t) has_singleton |= count[x] == 1;
    if (has_singleton) {
      if (std::abs(value) > bound) out.chi_class = false;
      return;
    }
    // A pair (2m, 2m+1) holding a value used nowhere else may be relabelled to any unused value.
    // Comparing against the smallest unused value covers every relabelling.
    for (std::size_t m = 0; m < ell; ++m) {
      std::size_t v = t[2 * m];
      if (t[2 * m + 1] != v || count[v] != 2) continue;
      std::size_t w = 0;
      while (w < n && count[w] != 0) ++w;
      if (w >= n || w > v) continue;
      std::copy(t.begin(), t.end(), alt.begin());
      alt[2 * m] = alt[2 * m + 1] = w;
      if (std::abs(f[alt] - value) > bound) out.chichi_definition = false;
    }
    if (out.clump_constant && *out.clump_constant) {
      // Canonical member of the clump class: spare pairs take the smallest values unused by the clump.
      std::vector<bool> used(n, false);
      std::vector<bool> spare(ell, false);
      for (std::size_t m = 0; m < ell; ++m) spare[m] = t[2 * m] == t[2 * m + 1] && count[t[2 * m]] == 2;
      for (std::size_t x = 0; x < len; ++x)
        if (!spare[x / 2]) used[t[x]] = true;
      std::copy(t.begin(), t.end(), alt.begin());
      std::size_t w = 0;
      for (std::size_t m = 0; m < ell; ++m) {
        if (!spare[m]) continue;
        while (used[w]) ++w;
        alt[2 * m] = alt[2 * m + 1] = w;
        used[w] = true;
      }
      if (std::abs(f[alt] - value) > bound) out.clump_constant = false;
    }
  });
  return out;
}

double sample_fibonacci(SeededRng& rng) {
  const double r5 = std::sqrt(5.0);
  const double p_plus = (r5 - 1.0) / (2.0 * r5);
  return rng.uniform01() < p_plus ? (1.0 + r5) / 2.0 : (1.0 - r5) / 2.0;
}

std::int64_t fibonacci_moment(unsigned k) {
  if (k > 40) throw CapacityError("fibonacci_moment: k exceeds 40");
  if (k == 0) return 1;
  std::int64_t a = 0, b = 1;  // m_1, m_2
  if (k == 1) return a;
  for (unsigned i = 2; i < k; ++i) {
    std::int64_t c = a + b;
    a = b;
    b = c;
  }
  return b;
}

std::int64_t fibonacci_weight(std::span<const std::size_t> t) {
  if (t.size() % 2 != 0) throw ValidationError("fibonacci_weight: tuple length must be even");
  if (t.size() > 16) throw CapacityError("fibonacci_weight: tuple length exceeds 16");
  const std::size_t ell = t.size() / 2;
  std::vector<std::size_t> equal_pairs;
  for (std::size_t m = 0; m < ell; ++m)
    if (t[2 * m] == t[2 * m + 1]) equal_pairs.push_back(m);

  // Distinct values and their multiplicities.
  std::vector<std::size_t> values;
  std::vector<unsigned> base;
  for (std::size_t x : t) {
    auto it = std::find(values.begin(), values.end(), x);
    if (it == values.end()) {
      values.push_back(x);
      base.push_back(1);
    } else {
      ++base[static_cast<std::size_t>(it - values.begin())];
    }
  }

  std::int64_t total = 0;
  const std::size_t subsets = std::size_t{1} << equal_pairs.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    // Pairs in `mask` contribute the -delta term, removing phi_v^2 from the product.
    std::vector<unsigned> exps = base;
    int sign = 1;
    for (std::size_t b = 0; b < equal_pairs.size(); ++b) {
      if (!(mask & (std::size_t{1} << b))) continue;
      std::size_t v = t[2 * equal_pairs[b]];
      exps[static_cast<std::size_t>(std::find(values.begin(), values.end(), v) - values.begin())] -= 2;
      sign = -sign;
    }
    std::int64_t term = sign;
    for (unsigned e : exps) term *= fibonacci_moment(e);
    total += term;
  }
  return total;
}

cplx block_product_sum(const std::vector<std::vector<cplx>>& f, const SetPartition& p,
                       const std::vector<bool>& excluded) {
  if (f.size() != p.ell()) throw ShapeError("block_product_sum: need one function per ground-set element");
  const std::size_t n = f.empty() ? 0 : f.front().size();
  cplx total = 1.0;
  for (const auto& block : p.blocks()) {
    cplx s{};
    for (std::size_t i = 0; i < n; ++i) {
      if (!excluded.empty() && excluded[i]) continue;
      cplx prod = 1.0;
      for (std::size_t b : block) prod *= f[b][i];
      s += prod;
    }
    total *= s;
  }
  return total;
}

}  // namespace liblab
