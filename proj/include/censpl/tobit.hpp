#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "censpl/model.hpp"
#include "censpl/optim.hpp"

namespace censpl {

struct FitOptions {
  // Hold PL(d0) at this value (e.g. fspl_reference) and estimate only n and
  // sigma.
  std::optional<double> fixed_pl_d0;
  optim::NelderMeadOptions optimizer;
  // Restart once from the best point with a fresh simplex when the first
  // search stops without meeting the tolerances.
  bool restart = true;
};

struct TobitFit {
  PathlossParams params;
  double nll = 0.0;  // minimized negative log-likelihood
  bool converged = false;
  int iterations = 0;  // summed over the initial search and the restart
  int restarts = 0;
  std::size_t n_censored = 0;
  std::size_t n_uncensored = 0;
  PathlossParams init;  // least-squares warm start
  std::optional<double> fixed_pl_d0;
  std::vector<double> best_history;
  std::vector<std::string> warnings;
};

// Censored-normal negative log-likelihood
//   sum_uncensored [ln sigma + ln sqrt(2 pi) + r_i^2 / 2] - sum_censored ln(1 - Phi(w_i))
// with r_i = (y_i - mu_i) / sigma and w_i = (c - mu_i) / sigma.
double tobit_nll(const PathlossParams& params, const Dataset& dataset);

// Minimizes tobit_nll over (PL(d0), n, ln sigma), or (n, ln sigma) when
// PL(d0) is fixed, starting from ordinary least squares with censored rows at
// c. Throws AllCensored without uncensored samples, DegenerateDesign if the
// uncensored samples share one distance and PL(d0) is free, and TooFewSamples
// for fewer than 3 samples. A fit that misses the tolerances is returned with
// converged == false.
TobitFit tobit_fit(const Dataset& dataset, const FitOptions& options = {});

}  // namespace censpl
