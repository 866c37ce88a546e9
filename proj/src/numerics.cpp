#include "censpl/numerics.hpp"

#include <cmath>
#include <limits>

#include "censpl/errors.hpp"

namespace censpl::numerics {

namespace {

// Below this point exp(x^2) * erfc(x) is accurate to a few ulp; above it the
// continued fraction needs fewer than 60 terms.
constexpr double kErfcxSwitch = 2.0;
constexpr int kMaxFractionTerms = 500;

// Laplace continued fraction
//   erfcx(x) = 1 / (sqrt(pi) * (x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...)))))
// evaluated with the modified Lentz algorithm.
double erfcx_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int k = 1; k <= kMaxFractionTerms; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    c = x + a / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (kSqrtPi * f);
}

}  // namespace

StandardScore::StandardScore(double z) : z_(z) {
  if (!std::isfinite(z)) throw DomainError("standard score must be finite");
}

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double log_normal_pdf(double z) { return -kHalfLog2Pi - 0.5 * z * z; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double log_normal_sf(double z) {
  if (z > 0.0) {
    return std::log(0.5 * erfcx(z / kSqrt2)) - 0.5 * z * z;
  }
  return std::log1p(-normal_cdf(z));
}

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x >= kErfcxSwitch) {
    if (x > 1e150) return 1.0 / (kSqrtPi * x);
    return erfcx_continued_fraction(x);
  }
  // exp(x^2) overflows first; the product is +inf there, which is the
  // saturated value.
  if (x < -26.7) return std::numeric_limits<double>::infinity();
  return std::exp(x * x) * std::erfc(x);
}

double mills_ratio(double z) {
  return 2.0 / (std::sqrt(2.0 * M_PI) * erfcx(z / kSqrt2));
}

}  // namespace censpl::numerics
