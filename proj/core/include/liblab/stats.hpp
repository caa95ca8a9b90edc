#pragma once

#include <span>
#include <vector>

namespace liblab {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

MeanEstimate mean_and_se(std::span<const double> xs);
double sample_variance(std::span<const double> xs);

struct SlopeEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double se = 0.0;
};

/// Ordinary least squares fit y ~ a + b x; se from residual variance.
SlopeEstimate ols_slope(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with known per-point standard errors (weights 1/sigma^2).
SlopeEstimate wls_slope(std::span<const double> x, std::span<const double> y,
                        std::span<const double> sigma);

struct Histogram {
  std::vector<double> edges;   // size bins + 1
  std::vector<double> masses;  // size bins, sums to 1
};

/// Freedman-Diaconis binning. A degenerate sample (IQR 0) yields one bin.
Histogram freedman_diaconis(std::vector<double> values, std::size_t max_bins = 1000);

double quantile_sorted(std::span<const double> sorted, double q);

/// sup_x |F_a(x) - F_b(x)| for two sorted samples of equal length, where an
/// eigenvalue of `b` within `slack` of one of `a` is treated as equal.
double edf_sup_distance(std::span<const double> a, std::span<const double> b, double slack = 0.0);

}  // namespace liblab
