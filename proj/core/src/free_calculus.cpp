#include "liblab/free_calculus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/container_hash/hash.hpp>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "liblab/errors.hpp"

namespace liblab {

MomentSequence::MomentSequence(std::vector<double> moments, std::optional<double> radius_hint)
    : m_(std::move(moments)), radius_(radius_hint) {}

MomentSequence MomentSequence::point_mass(double c, std::size_t order) {
  std::vector<double> m(order);
  double p = 1.0;
  for (auto& x : m) x = (p *= c);
  return MomentSequence(std::move(m), std::abs(c));
}

MomentSequence MomentSequence::symmetric_bernoulli(std::size_t order) {
  std::vector<double> m(order);
  for (std::size_t k = 0; k < order; ++k) m[k] = (k % 2 == 1) ? 1.0 : 0.0;
  return MomentSequence(std::move(m), 1.0);
}

MomentSequence MomentSequence::bernoulli(double p, std::size_t order) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("MomentSequence::bernoulli: p must lie in [0,1]");
  return MomentSequence(std::vector<double>(order, p), 1.0);
}

double MomentSequence::operator[](std::size_t k) const {
  if (k == 0) return 1.0;
  if (k > m_.size())
    throw ValidationError("MomentSequence: moment " + std::to_string(k) + " requested but only " +
                          std::to_string(m_.size()) + " known");
  return m_[k - 1];
}

namespace {

bool psd(const Eigen::MatrixXd& h, double tol) {
  if (h.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

}  // namespace

bool MomentSequence::hankel_consistent(double tol) const {
  const std::size_t d = order() / 2 + 1;
  Eigen::MatrixXd h(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)[i + j];
  return psd(h, tol);
}

bool MomentSequence::supported_on_nonnegative(double tol) const {
  if (!hankel_consistent(tol)) return false;
  if (order() == 0) return true;
  const std::size_t d = (order() - 1) / 2 + 1;
  Eigen::MatrixXd h(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)[i + j + 1];
  return psd(h, tol);
}

namespace {

// Token layout: label << 17 | power << 1 | centered.
using Token = std::uint32_t;
using Word = std::vector<Token>;

Token make_token(std::size_t label, unsigned power, bool centered) {
  return static_cast<Token>(label << 17 | power << 1 | (centered ? 1u : 0u));
}
std::size_t label_of(Token t) { return t >> 17; }
unsigned power_of(Token t) { return (t >> 1) & 0xffffu; }
bool centered(Token t) { return t & 1u; }

class FreeEvaluator {
 public:
  explicit FreeEvaluator(const std::vector<MomentSequence>& marginals) : m_(marginals) {}

  double eval(const Word& w) {
    if (w.empty()) return 1.0;
    if (auto it = memo_.find(w); it != memo_.end()) return it->second;
    double r = compute(w);
    memo_.emplace(w, r);
    return r;
  }

 private:
  double moment(std::size_t label, unsigned p) const { return m_[label][p]; }

  static Word splice(const Word& w, std::size_t at, std::size_t erase, std::initializer_list<Token> insert) {
    Word out;
    out.reserve(w.size() + insert.size());
    out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(at));
    out.insert(out.end(), insert.begin(), insert.end());
    out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(at + erase), w.end());
    return out;
  }

  double compute(const Word& w) {
    // Merge the first adjacent pair from the same algebra.
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (label_of(w[i]) != label_of(w[i + 1])) continue;
      const std::size_t l = label_of(w[i]);
      const unsigned p = power_of(w[i]), q = power_of(w[i + 1]);
      const bool cp = centered(w[i]), cq = centered(w[i + 1]);
      double r = eval(splice(w, i, 2, {make_token(l, p + q, false)}));
      if (cq) r -= moment(l, q) * eval(splice(w, i, 2, {make_token(l, p, false)}));
      if (cp) r -= moment(l, p) * eval(splice(w, i, 2, {make_token(l, q, false)}));
      if (cp && cq) r += moment(l, p) * moment(l, q) * eval(splice(w, i, 2, {}));
      return r;
    }
    // Alternating from here on.
    auto raw = std::find_if(w.begin(), w.end(), [](Token t) { return !centered(t); });
    if (raw == w.end()) return 0.0;
    const auto r = static_cast<std::size_t>(raw - w.begin());
    const std::size_t l = label_of(*raw);
    const unsigned p = power_of(*raw);
    if (w.size() == 1) return moment(l, p);
    // a^p = (a^p - m_p) + m_p
    return eval(splice(w, r, 1, {make_token(l, p, true)})) + moment(l, p) * eval(splice(w, r, 1, {}));
  }

  const std::vector<MomentSequence>& m_;
  std::unordered_map<Word, double, boost::hash<Word>> memo_;
};

Word to_word(const std::vector<MomentSequence>& marginals, const AlternatingWord& word) {
  if (word.size() > kMaxWordLength)
    throw CapacityError("free_mixed_moment: word length " + std::to_string(word.size()) + " exceeds " +
                        std::to_string(kMaxWordLength));
  std::vector<unsigned> need(marginals.size(), 0);
  Word w;
  for (const Letter& x : word) {
    if (x.label >= marginals.size()) throw ValidationError("free_mixed_moment: unknown label");
    if (x.power == 0) continue;
    if (x.power > 0xffffu) throw CapacityError("free_mixed_moment: power too large");
    need[x.label] += x.power;
    w.push_back(make_token(x.label, x.power, false));
  }
  for (std::size_t l = 0; l < marginals.size(); ++l)
    if (need[l] > marginals[l].order())
      throw ValidationError("free_mixed_moment: marginal " + std::to_string(l) + " needs order " +
                            std::to_string(need[l]) + " but has " + std::to_string(marginals[l].order()));
  return w;
}

}  // namespace

double free_mixed_moment(const std::vector<MomentSequence>& marginals, const AlternatingWord& word) {
  Word w = to_word(marginals, word);
  FreeEvaluator ev(marginals);
  return ev.eval(w);
}

double free_mixed_moment(const std::map<std::string, MomentSequence>& marginals,
                         const std::vector<std::string>& word) {
  std::vector<MomentSequence> ms;
  std::map<std::string, std::size_t> index;
  for (const auto& [name, m] : marginals) {
    index[name] = ms.size();
    ms.push_back(m);
  }
  AlternatingWord w;
  for (const auto& name : word) {
    auto it = index.find(name);
    if (it == index.end()) throw ValidationError("free_mixed_moment: no marginal for label '" + name + "'");
    w.push_back({it->second, 1});
  }
  return free_mixed_moment(ms, w);
}

MomentSequence free_additive_moments(const MomentSequence& a, const MomentSequence& b, std::size_t k) {
  if (k > 12) throw CapacityError("free_additive_moments: K exceeds 12");
  // Canonical operand order makes the result exactly symmetric in (a, b).
  const bool swap = b.moments() < a.moments();
  std::vector<MomentSequence> ms{swap ? b : a, swap ? a : b};
  for (const auto& m : ms)
    if (m.order() < k) throw ValidationError("free_additive_moments: marginal order below K");
  FreeEvaluator ev(ms);
  std::vector<double> out(k);
  for (std::size_t order = 1; order <= k; ++order) {
    double s = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << order); ++mask) {
      AlternatingWord w(order);
      for (std::size_t x = 0; x < order; ++x) w[x] = {(mask >> x) & 1u, 1};
      s += ev.eval(to_word(ms, w));
    }
    out[order - 1] = s;
  }
  std::optional<double> radius;
  if (a.radius_hint() && b.radius_hint()) radius = *a.radius_hint() + *b.radius_hint();
  return MomentSequence(std::move(out), radius);
}

MomentSequence free_multiplicative_moments(const MomentSequence& a, const MomentSequence& b, std::size_t k) {
  if (k > 10) throw CapacityError("free_multiplicative_moments: K exceeds 10");
  if (!a.supported_on_nonnegative())
    throw ValidationError("free_multiplicative_moments: first law is not supported on [0, inf)");
  std::vector<MomentSequence> ms{a, b};
  for (const auto& m : ms)
    if (m.order() < k) throw ValidationError("free_multiplicative_moments: marginal order below K");
  FreeEvaluator ev(ms);
  std::vector<double> out(k);
  for (std::size_t order = 1; order <= k; ++order) {
    AlternatingWord w;
    for (std::size_t x = 0; x < order; ++x) {
      w.push_back({0, 1});
      w.push_back({1, 1});
    }
    out[order - 1] = ev.eval(to_word(ms, w));
  }
  std::optional<double> radius;
  if (a.radius_hint() && b.radius_hint()) radius = *a.radius_hint() * *b.radius_hint();
  return MomentSequence(std::move(out), radius);
}

}  // namespace liblab
