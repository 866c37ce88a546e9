#include "censpl/tobit.hpp"

#include <cmath>
#include <span>

#include "censpl/errors.hpp"
#include "censpl/numerics.hpp"
#include "censpl/ols.hpp"

namespace censpl {

namespace {

constexpr double kHighCensoringFraction = 0.9;

// Regressors and values laid out once per fit.
struct Prepared {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<bool> censored;
  double c = 0.0;

  explicit Prepared(const Dataset& dataset) : c(dataset.c()) {
    x.reserve(dataset.size());
    y.reserve(dataset.size());
    censored.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      x.push_back(dataset.regressor(i));
      y.push_back(dataset[i].value);
      censored.push_back(dataset[i].censored);
    }
  }
};

double negative_log_likelihood(double pl_d0, double n, double sigma, const Prepared& data) {
  const double inv_sigma = 1.0 / sigma;
  const double log_sigma = std::log(sigma);
  double nll = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double mu = pl_d0 + n * data.x[i];
    if (data.censored[i]) {
      nll -= numerics::log_normal_sf((data.c - mu) * inv_sigma);
    } else {
      const double r = (data.y[i] - mu) * inv_sigma;
      nll += log_sigma - numerics::log_normal_pdf(r);
    }
  }
  return nll;
}

PathlossParams warm_start(const Dataset& dataset, const Prepared& data,
                          const std::optional<double>& fixed_pl_d0) {
  PathlossParams init;
  try {
    init = ols_fit(dataset, CensoredHandling::SubstituteC).params;
  } catch (const DegenerateDesign&) {
    if (!fixed_pl_d0) throw;
    // Every sample at one distance: only the slope through the fixed
    // intercept is available.
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      sxx += data.x[i] * data.x[i];
      sxy += data.x[i] * (data.y[i] - *fixed_pl_d0);
    }
    init.n = sxx > 0.0 ? sxy / sxx : 0.0;
    double rss = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      const double r = data.y[i] - (*fixed_pl_d0 + init.n * data.x[i]);
      rss += r * r;
    }
    init.sigma = std::sqrt(rss / static_cast<double>(data.x.size()));
  }
  if (fixed_pl_d0) init.pl_d0 = *fixed_pl_d0;
  if (!(init.sigma > 0.0) || !std::isfinite(init.sigma)) init.sigma = 1.0;
  return init;
}

}  // namespace

double tobit_nll(const PathlossParams& params, const Dataset& dataset) {
  if (!(params.sigma > 0.0)) throw DomainError("sigma must be positive");
  return negative_log_likelihood(params.pl_d0, params.n, params.sigma, Prepared(dataset));
}

TobitFit tobit_fit(const Dataset& dataset, const FitOptions& options) {
  if (dataset.uncensored_count() == 0) {
    throw AllCensored("every sample is censored; the likelihood has no finite maximum");
  }
  if (dataset.size() < 3) {
    throw TooFewSamples("censored fit needs at least 3 samples, got " +
                        std::to_string(dataset.size()));
  }
  if (options.fixed_pl_d0 && !std::isfinite(*options.fixed_pl_d0)) {
    throw DomainError("fixed PL(d0) must be finite");
  }
  const bool free_intercept = !options.fixed_pl_d0;
  if (free_intercept) {
    std::optional<double> first;
    bool distinct = false;
    for (const auto& s : dataset.samples()) {
      if (s.censored) continue;
      if (!first) first = s.distance;
      distinct = distinct || s.distance != *first;
    }
    if (!distinct) {
      throw DegenerateDesign("uncensored samples share one distance; PL(d0) and n are not identified");
    }
  }

  const Prepared data(dataset);
  TobitFit fit;
  fit.n_censored = dataset.censored_count();
  fit.n_uncensored = dataset.uncensored_count();
  fit.fixed_pl_d0 = options.fixed_pl_d0;
  fit.init = warm_start(dataset, data, options.fixed_pl_d0);

  const double fixed = options.fixed_pl_d0.value_or(0.0);
  const optim::Objective objective = [&](std::span<const double> v) {
    if (free_intercept) return negative_log_likelihood(v[0], v[1], std::exp(v[2]), data);
    return negative_log_likelihood(fixed, v[0], std::exp(v[1]), data);
  };

  std::vector<double> x0;
  if (free_intercept) x0.push_back(fit.init.pl_d0);
  x0.push_back(fit.init.n);
  x0.push_back(std::log(fit.init.sigma));
  if (!std::isfinite(objective(x0))) {
    throw NonFinite("negative log-likelihood is not finite at the warm start");
  }

  auto result = optim::nelder_mead(objective, x0, options.optimizer);
  fit.iterations = result.iterations;
  fit.best_history = result.best_history;
  if (!result.converged && options.restart) {
    auto second = optim::nelder_mead(objective, result.x_min, options.optimizer);
    fit.restarts = 1;
    fit.iterations += second.iterations;
    fit.best_history.insert(fit.best_history.end(), second.best_history.begin(),
                            second.best_history.end());
    // The restart begins at the previous best vertex, so it never ends worse.
    result = std::move(second);
  }

  const auto& x = result.x_min;
  fit.params = free_intercept ? PathlossParams{x[0], x[1], std::exp(x[2])}
                              : PathlossParams{fixed, x[0], std::exp(x[1])};
  fit.nll = result.f_min;
  fit.converged = result.converged;

  if (dataset.censored_fraction() > kHighCensoringFraction) {
    fit.warnings.push_back("censored fraction above 0.9; parameters are weakly identified");
  }
  if (!fit.converged) fit.warnings.push_back("optimizer stopped before meeting its tolerances");
  return fit;
}

}  // namespace censpl
