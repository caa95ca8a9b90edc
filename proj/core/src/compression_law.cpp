#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "liblab/errors.hpp"
#include "liblab/free_calculus.hpp"

namespace liblab {

CompressionLaw compression_law(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
    throw ValidationError("compression_law: alpha and beta must lie in (0,1)");
  CompressionLaw law;
  law.alpha = alpha;
  law.beta = beta;
  law.atom0 = 1.0 - std::min(alpha, beta);
  law.atom1 = std::max(alpha + beta - 1.0, 0.0);
  const double centre = alpha + beta - 2.0 * alpha * beta;
  const double half = std::sqrt(4.0 * alpha * beta * (1.0 - alpha) * (1.0 - beta));
  law.lambda_minus = std::clamp(centre - half, 0.0, 1.0);
  law.lambda_plus = std::clamp(centre + half, 0.0, 1.0);
  return law;
}

double compression_density(const CompressionLaw& law, double x) {
  if (!(x > law.lambda_minus && x < law.lambda_plus) || x <= 0.0 || x >= 1.0) return 0.0;
  return std::sqrt((law.lambda_plus - x) * (x - law.lambda_minus)) / (2.0 * std::numbers::pi * x * (1.0 - x));
}

namespace {

// Integral of g(x) * density(x) over (a, b) within the support, with x = a + (b-a) sin^2(theta)
// to absorb the square-root edges.
template <class G>
double integrate_density(const CompressionLaw& law, double a, double b, G g) {
  a = std::max(a, law.lambda_minus);
  b = std::min(b, law.lambda_plus);
  if (!(b > a)) return 0.0;
  const double lm = law.lambda_minus, lp = law.lambda_plus, w = b - a;
  auto integrand = [&](double t) {
    const double s = std::sin(t), c = std::cos(t);
    const double x = a + w * s * s;
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double root = std::sqrt(std::max(0.0, (lp - x) * (x - lm)));
    return g(x) * root * 2.0 * w * s * c / (2.0 * std::numbers::pi * x * (1.0 - x));
  };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, std::numbers::pi / 2.0, 20, kTolerances.quadrature, &err);
}

}  // namespace

double compression_continuous_mass(const CompressionLaw& law) {
  return integrate_density(law, law.lambda_minus, law.lambda_plus, [](double) { return 1.0; });
}

double compression_total_mass(const CompressionLaw& law) {
  return law.atom0 + law.atom1 + compression_continuous_mass(law);
}

double compression_interval_mass(const CompressionLaw& law, double lo, double hi) {
  return integrate_density(law, lo, hi, [](double) { return 1.0; });
}

MomentSequence law_moments_by_quadrature(const CompressionLaw& law, std::size_t k) {
  if (k > 10) throw CapacityError("law_moments_by_quadrature: K exceeds 10");
  std::vector<double> m(k);
  for (std::size_t p = 1; p <= k; ++p)
    m[p - 1] = law.atom1 + integrate_density(law, law.lambda_minus, law.lambda_plus,
                                             [p](double x) { return std::pow(x, static_cast<double>(p)); });
  return MomentSequence(std::move(m), 1.0);
}

}  // namespace liblab
