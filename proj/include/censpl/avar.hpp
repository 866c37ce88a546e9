#pragma once

#include <array>
#include <optional>

#include "censpl/model.hpp"
#include "censpl/numerics.hpp"
#include "censpl/tobit.hpp"

namespace censpl {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Vector3 = std::array<double, 3>;

// Per-sample information weights for the censored-below-zero model in the
// parameterization (alpha_t, sigma^2).
struct AvarCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// a = -[z phi - phi^2/(1-Phi) - Phi] / sigma^2
// b =  [z^2 phi + phi - z phi^2/(1-Phi)] / (2 sigma^3)
// c = -[z^3 phi + z phi - z^2 phi^2/(1-Phi) - 2 Phi] / (4 sigma^4)
// with phi^2/(1-Phi) = phi * mills_ratio(z). Throws DomainError if sigma <= 0.
AvarCoefficients avar_coefficients(numerics::StandardScore z, double sigma);

struct AvarMatrix {
  // Summed information over all samples, ordered (alpha_t0, alpha_t1, sigma^2).
  // Variances are identical for (PL(d0), n, sigma^2).
  Matrix3 a_matrix{};
  // Diagonal of the inverse: Avar of PL(d0), n and sigma^2. With PL(d0) held
  // fixed the first row and column are removed before inversion and the
  // PL(d0) entry is reported as 0.
  Vector3 inverse_diag{};
  Vector3 se{};
  bool pl_d0_fixed = false;
};

// Sums the information of every sample (censored or not) at z_i = (c - mu_i) /
// sigma and inverts it. Scores beyond +-1e3 are clamped; the coefficients
// have reached their limits there. Throws SingularInformation when the 1-norm
// condition estimate exceeds 1e12.
AvarMatrix avar_matrix(const PathlossParams& params, const Dataset& dataset,
                       bool pl_d0_fixed = false);

struct TobitStandardErrors {
  std::optional<double> se_pl_d0;  // empty when PL(d0) was fixed
  double se_n = 0.0;
  double se_sigma_sq = 0.0;
};

// avar_matrix at the fitted parameters. Unconverged fits are evaluated at
// their final point.
TobitStandardErrors estimate_standard_errors(const TobitFit& fit, const Dataset& dataset);

// Closed-form adjugate inverse. Throws SingularInformation if the determinant
// is zero or not finite.
Matrix3 invert_3x3(const Matrix3& m);

}  // namespace censpl
