#include "censpl/ols.hpp"

#include <cmath>
#include <string>

#include "censpl/errors.hpp"

namespace censpl {

std::string_view to_string(CensoredHandling mode) {
  switch (mode) {
    case CensoredHandling::SubstituteC:
      return "substitute";
    case CensoredHandling::DropCensored:
      return "drop";
  }
  return "substitute";
}

CensoredHandling censored_handling_from_string(std::string_view name) {
  if (name == "substitute") return CensoredHandling::SubstituteC;
  if (name == "drop") return CensoredHandling::DropCensored;
  throw DomainError("unknown censored handling '" + std::string(name) + "'");
}

OlsFit ols_fit(const Dataset& dataset, CensoredHandling mode) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(dataset.size());
  ys.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset[i];
    if (s.censored && mode == CensoredHandling::DropCensored) continue;
    xs.push_back(dataset.regressor(i));
    ys.push_back(s.value);
  }
  const std::size_t count = xs.size();
  if (count < 3) {
    throw TooFewSamples("least squares needs at least 3 samples, got " + std::to_string(count));
  }
  bool distinct = false;
  for (double x : xs) distinct = distinct || (x != xs.front());
  if (!distinct) throw DegenerateDesign("all samples share one distance");

  const double inv_count = 1.0 / static_cast<double>(count);
  double x_bar = 0.0;
  double y_bar = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    x_bar += xs[i];
    y_bar += ys[i];
  }
  x_bar *= inv_count;
  y_bar *= inv_count;

  double s_xx = 0.0;
  double s_xy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = xs[i] - x_bar;
    s_xx += dx * dx;
    s_xy += dx * (ys[i] - y_bar);
  }
  if (!(s_xx > 0.0)) throw DegenerateDesign("regressor has zero spread");

  OlsFit fit;
  fit.mode = mode;
  fit.count = count;
  fit.x_bar = x_bar;
  fit.s_xx = s_xx;
  fit.params.n = s_xy / s_xx;
  fit.params.pl_d0 = y_bar - fit.params.n * x_bar;

  double rss = 0.0;
  fit.residuals.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = ys[i] - (fit.params.pl_d0 + fit.params.n * xs[i]);
    fit.residuals[i] = r;
    rss += r * r;
  }
  fit.sigma_sq_hat = rss / static_cast<double>(count - 1);
  fit.params.sigma = std::sqrt(fit.sigma_sq_hat);

  const auto se = ols_standard_errors(fit, count);
  fit.se_n = se.se_n;
  fit.se_pl_d0 = se.se_pl_d0;
  return fit;
}

OlsStandardErrors ols_standard_errors(const OlsFit& fit, std::size_t count) {
  if (!(fit.s_xx > 0.0)) throw DegenerateDesign("regressor has zero spread");
  if (count == 0) throw TooFewSamples("sample count must be positive");
  const double sigma = std::sqrt(fit.sigma_sq_hat);
  return {sigma * std::sqrt(1.0 / static_cast<double>(count) + fit.x_bar * fit.x_bar / fit.s_xx),
          sigma * std::sqrt(1.0 / fit.s_xx)};
}

}  // namespace censpl
