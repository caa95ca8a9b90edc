#include "liblab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "liblab/errors.hpp"

namespace liblab {

MeanEstimate mean_and_se(std::span<const double> xs) {
  MeanEstimate r;
  if (xs.empty()) return r;
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) r.se = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
  return r;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

SlopeEstimate ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("ols_slope: length mismatch");
  if (x.size() < 3) throw ValidationError("ols_slope: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("ols_slope: x has no spread");
  SlopeEstimate r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - r.intercept - r.slope * x[i];
    rss += e * e;
  }
  r.se = std::sqrt(rss / (n - 2.0) / sxx);
  return r;
}

SlopeEstimate wls_slope(std::span<const double> x, std::span<const double> y,
                        std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size()) throw ShapeError("wls_slope: length mismatch");
  if (x.size() < 2) throw ValidationError("wls_slope: need at least 2 points");
  double sw = 0, swx = 0, swy = 0;
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = std::max(sigma[i], 1e-300);
    w[i] = 1.0 / (s * s);
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  double mx = swx / sw, my = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("wls_slope: x has no spread");
  SlopeEstimate r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.se = std::sqrt(1.0 / sxx);
  return r;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

Histogram freedman_diaconis(std::vector<double> values, std::size_t max_bins) {
  Histogram h;
  if (values.empty()) return h;
  std::sort(values.begin(), values.end());
  const double lo = values.front(), hi = values.back();
  const double iqr = quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
  std::size_t bins = 1;
  if (iqr > 0.0 && hi > lo) {
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, max_bins);
  }
  double right = hi > lo ? hi : lo + 1.0;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    h.edges[b] = lo + (right - lo) * static_cast<double>(b) / static_cast<double>(bins);
  h.edges.back() = right;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / (right - lo) * static_cast<double>(bins));
    counts[std::min(b, bins - 1)]++;
  }
  h.masses.resize(bins);
  // Masses are count/total so that they sum to 1 up to rounding of each term.
  const double total = static_cast<double>(values.size());
  for (std::size_t b = 0; b < bins; ++b) h.masses[b] = static_cast<double>(counts[b]) / total;
  return h;
}

double edf_sup_distance(std::span<const double> a, std::span<const double> b, double slack) {
  if (a.size() != b.size()) throw ShapeError("edf_sup_distance: samples differ in length");
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  auto count_le = [](std::span<const double> s, double x) {
    return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin());
  };
  // One-sided excess of F_p over F_q, shifted right by slack. Sup is attained at a jump of F_p.
  auto excess = [&](std::span<const double> p, std::span<const double> q) {
    double best = 0.0;
    for (double x : p) best = std::max(best, (count_le(p, x) - count_le(q, x + slack)) / n);
    return best;
  };
  return std::max(excess(a, b), excess(b, a));
}

}  // namespace liblab
