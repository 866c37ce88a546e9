#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "censpl/model.hpp"

namespace censpl {

// How censored rows enter the least-squares baseline.
enum class CensoredHandling {
  SubstituteC,   // censored rows participate with y = c
  DropCensored,  // censored rows are excluded
};

std::string_view to_string(CensoredHandling mode);
CensoredHandling censored_handling_from_string(std::string_view name);

struct OlsFit {
  // sigma is sqrt(sigma_sq_hat) and may be 0 for collinear data.
  PathlossParams params;
  double se_n = 0.0;
  double se_pl_d0 = 0.0;  // dB
  // RSS / (L - 1). The divisor is L - 1, not the L - 2 most regression
  // packages use.
  double sigma_sq_hat = 0.0;
  // y - X alpha for the rows that entered the fit, in dataset order.
  std::vector<double> residuals;
  double x_bar = 0.0;
  double s_xx = 0.0;
  std::size_t count = 0;  // L
  CensoredHandling mode = CensoredHandling::SubstituteC;
};

// Closed-form 2x2 least squares. Throws TooFewSamples if fewer than 3 rows
// remain after filtering and DegenerateDesign if they share one distance.
OlsFit ols_fit(const Dataset& dataset, CensoredHandling mode = CensoredHandling::SubstituteC);

struct OlsStandardErrors {
  double se_pl_d0 = 0.0;
  double se_n = 0.0;
};

// se_n = sigma_hat / sqrt(S_xx), se_pl_d0 = sigma_hat * sqrt(1/L + x_bar^2 / S_xx).
OlsStandardErrors ols_standard_errors(const OlsFit& fit, std::size_t count);

}  // namespace censpl
