#include "censpl/avar.hpp"

#include <algorithm>
#include <cmath>

#include "censpl/errors.hpp"

namespace censpl {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kScoreClamp = 1e3;

template <std::size_t N>
double one_norm(const std::array<std::array<double, N>, N>& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < N; ++i) col += std::fabs(m[i][j]);
    best = std::max(best, col);
  }
  return best;
}

template <std::size_t N>
void check_condition(const std::array<std::array<double, N>, N>& m,
                     const std::array<std::array<double, N>, N>& inverse) {
  const double condition = one_norm(m) * one_norm(inverse);
  if (!std::isfinite(condition) || condition > kMaxCondition) {
    throw SingularInformation("information matrix is numerically singular (condition " +
                              std::to_string(condition) + ")");
  }
}

std::array<std::array<double, 2>, 2> invert_2x2(const std::array<std::array<double, 2>, 2>& m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det == 0.0 || !std::isfinite(det)) throw SingularInformation("information matrix is singular");
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

}  // namespace

AvarCoefficients avar_coefficients(numerics::StandardScore score, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const double z = score.value();
  const double phi = numerics::normal_pdf(z);
  const double cdf = numerics::normal_cdf(z);
  const double phi_sq_over_tail = phi * numerics::mills_ratio(z);
  const double s2 = sigma * sigma;

  AvarCoefficients k;
  k.a = -(z * phi - phi_sq_over_tail - cdf) / s2;
  k.b = (z * z * phi + phi - z * phi_sq_over_tail) / (2.0 * s2 * sigma);
  k.c = -(z * z * z * phi + z * phi - z * z * phi_sq_over_tail - 2.0 * cdf) / (4.0 * s2 * s2);
  return k;
}

Matrix3 invert_3x3(const Matrix3& m) {
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (det == 0.0 || !std::isfinite(det)) throw SingularInformation("information matrix is singular");

  Matrix3 inv;
  inv[0][0] = c00 / det;
  inv[1][0] = c01 / det;
  inv[2][0] = c02 / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

AvarMatrix avar_matrix(const PathlossParams& params, const Dataset& dataset, bool pl_d0_fixed) {
  params.validate();
  const auto tp = to_transformed(params, dataset.c());

  AvarMatrix out;
  out.pl_d0_fixed = pl_d0_fixed;
  auto& m = out.a_matrix;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double x = dataset.regressor(i);
    double z = (tp.alpha_t[0] + tp.alpha_t[1] * x) / tp.sigma;
    if (std::isnan(z)) throw DomainError("standard score is NaN");
    z = std::clamp(z, -kScoreClamp, kScoreClamp);
    const auto k = avar_coefficients(numerics::StandardScore(z), tp.sigma);
    m[0][0] += k.a;
    m[0][1] += k.a * x;
    m[1][1] += k.a * x * x;
    m[0][2] += k.b;
    m[1][2] += k.b * x;
    m[2][2] += k.c;
  }
  m[1][0] = m[0][1];
  m[2][0] = m[0][2];
  m[2][1] = m[1][2];

  if (pl_d0_fixed) {
    const std::array<std::array<double, 2>, 2> reduced{{{m[1][1], m[1][2]}, {m[2][1], m[2][2]}}};
    const auto inv = invert_2x2(reduced);
    check_condition(reduced, inv);
    out.inverse_diag = {0.0, inv[0][0], inv[1][1]};
  } else {
    const auto inv = invert_3x3(m);
    check_condition(m, inv);
    out.inverse_diag = {inv[0][0], inv[1][1], inv[2][2]};
  }
  for (std::size_t j = 0; j < 3; ++j) {
    const double v = out.inverse_diag[j];
    if (j == 0 && pl_d0_fixed) continue;
    if (!(v > 0.0)) throw SingularInformation("information matrix is not positive definite");
    out.se[j] = std::sqrt(v);
  }
  return out;
}

TobitStandardErrors estimate_standard_errors(const TobitFit& fit, const Dataset& dataset) {
  const bool fixed = fit.fixed_pl_d0.has_value();
  const auto avar = avar_matrix(fit.params, dataset, fixed);
  TobitStandardErrors se;
  if (!fixed) se.se_pl_d0 = avar.se[0];
  se.se_n = avar.se[1];
  se.se_sigma_sq = avar.se[2];
  return se;
}

}  // namespace censpl
