#pragma once

// Standard normal special functions used by the censored likelihood and the
// asymptotic variance. All functions are total on finite inputs: extreme tails
// saturate to 0, 1 or their asymptote instead of producing NaN.

namespace censpl::numerics {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

// z_i = x_i * alpha_t / sigma. Rejects NaN and infinities.
class StandardScore {
 public:
  explicit StandardScore(double z);

  double value() const noexcept { return z_; }

 private:
  double z_;
};

double normal_pdf(double z);

// ln phi(z), exact for every finite z.
double log_normal_pdf(double z);

double normal_cdf(double z);

// Upper tail 1 - Phi(z) without cancellation for large z.
double normal_sf(double z);

// ln(1 - Phi(z)). Finite for |z| up to several hundred: the upper tail goes
// through erfcx, the lower tail through log1p.
double log_normal_sf(double z);

// Scaled complementary error function exp(x^2) * erfc(x). Returns +inf once
// the result overflows (x below about -26.6).
double erfcx(double x);

// Inverse Mills ratio phi(z) / (1 - Phi(z)), evaluated as
// 2 / (sqrt(2 pi) * erfcx(z / sqrt(2))).
double mills_ratio(double z);

}  // namespace censpl::numerics
