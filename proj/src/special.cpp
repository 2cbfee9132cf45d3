#include "fracmax/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracmax/errors.hpp"

namespace fracmax {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kSeriesSwitch = -10.0;

// Relative accuracy a route must certify before its value is returned.
constexpr double kTrust = 1e-10;

// -Σ z^{-k}/Γ(1-αk), truncated at the smallest term. `bound` receives the first omitted
// term, the truncation error estimate.
double asymptotic_tail(double alpha, double z, double& bound) {
  double sum = 0.0;
  double zpow = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kMaxTerms; ++k) {
    zpow /= z;
    const double term = -zpow * reciprocal_gamma(1.0 - alpha * k);
    const double mag = std::abs(term);
    if (mag == 0.0) continue;  // 1/Γ at a pole
    if (mag > last) {
      bound = mag;
      return sum;
    }
    sum += term;
    last = mag;
    if (mag <= 1e-16 * std::abs(sum)) {
      bound = mag;
      return sum;
    }
  }
  bound = last;
  return sum;
}

// `largest` receives the largest term magnitude; eps·largest bounds the cancellation error.
double power_series(double alpha, double z, double& largest) {
  largest = 1.0;
  if (z == 0.0) return 1.0;
  const double logz = std::log(std::abs(z));
  const bool negative = z < 0.0;
  double sum = 1.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    double term = std::exp(k * logz - std::lgamma(alpha * k + 1.0));
    if (negative && (k % 2 == 1)) term = -term;
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (!std::isfinite(sum)) throw NumericError("mittag_leffler: series overflow");
    if (std::abs(term) < 1e-15 * std::abs(sum)) return sum;
  }
  throw NumericError("mittag_leffler: series did not converge within 10000 terms");
}

}  // namespace

double reciprocal_gamma(double x) {
  if (x > 0.5) return 1.0 / std::tgamma(x);
  // Reflection: 1/Γ(x) = Γ(1-x) sin(πx) / π.
  const double r = std::round(x);
  if (x == r) return 0.0;
  return std::tgamma(1.0 - x) * std::sin(std::numbers::pi * x) / std::numbers::pi;
}

double mittag_leffler(double alpha, double z) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
  }
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: z must be finite");
  if (alpha == 1.0) return std::exp(z);
  if (z < kSeriesSwitch) {
    double bound = 0.0;
    const double v = asymptotic_tail(alpha, z, bound);
    if (bound <= kTrust * std::abs(v)) return v;
    return mittag_leffler_neg(alpha, -z);
  }
  double largest = 1.0;
  double v = 0.0;
  try {
    v = power_series(alpha, z, largest);
  } catch (const NumericError&) {
    if (z >= 0.0) throw;
    return mittag_leffler_neg(alpha, -z);
  }
  if (z < 0.0 && largest * std::numeric_limits<double>::epsilon() * 64.0 > kTrust * std::abs(v)) {
    return mittag_leffler_neg(alpha, -z);
  }
  return v;
}

double stieltjes_ml_transform(double alpha, const std::function<double(double)>& F) {
  using boost::math::quadrature::gauss_kronrod;
  const double theta = alpha * std::numbers::pi;
  const double c = std::cos(theta);
  const double inv_alpha = 1.0 / alpha;
  // [0,1] in u, [1,∞) folded onto (0,1] with u = 1/w.
  auto inner = [&](double u) { return F(std::pow(u, inv_alpha)) / (u * u + 2.0 * u * c + 1.0); };
  auto outer = [&](double w) {
    if (w == 0.0) return 0.0;
    return F(std::pow(w, -inv_alpha)) / (1.0 + 2.0 * w * c + w * w);
  };
  double err = 0.0;
  const double a = gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 15, 1e-10, &err);
  const double b = gauss_kronrod<double, 31>::integrate(outer, 0.0, 1.0, 15, 1e-10, &err);
  return std::sin(theta) / theta * (a + b);
}

double mittag_leffler_neg(double alpha, double x) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("mittag_leffler_neg: alpha must lie in (0, 1)");
  }
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("mittag_leffler_neg: x must be >= 0");
  if (x == 0.0) return 1.0;
  const double s = std::pow(x, 1.0 / alpha);
  return stieltjes_ml_transform(alpha, [s](double p) { return std::exp(-p * s); });
}

}  // namespace fracmax
