#include "censpl/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "censpl/avar.hpp"
#include "censpl/errors.hpp"
#include "censpl/ols.hpp"

namespace censpl {

std::string_view to_string(Spacing spacing) {
  return spacing == Spacing::Log ? "log" : "linear";
}

Spacing spacing_from_string(std::string_view name) {
  if (name == "log") return Spacing::Log;
  if (name == "linear") return Spacing::Linear;
  throw SpecError("unknown spacing '" + std::string(name) + "' (expected log or linear)");
}

std::string_view to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::OlsSubstitute:
      return "ols_substitute";
    case Estimator::OlsDrop:
      return "ols_drop";
    case Estimator::Tobit:
      return "tobit";
  }
  return "tobit";
}

Estimator estimator_from_string(std::string_view name) {
  if (name == "ols_substitute") return Estimator::OlsSubstitute;
  if (name == "ols_drop") return Estimator::OlsDrop;
  if (name == "tobit") return Estimator::Tobit;
  throw SpecError("unknown estimator '" + std::string(name) + "'");
}

std::vector<double> DistanceGrid::distances() const {
  std::vector<double> d(count);
  if (count == 1) {
    d[0] = d_min;
    return d;
  }
  const double steps = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / steps;
    d[i] = spacing == Spacing::Log ? d_min * std::pow(d_max / d_min, t)
                                   : d_min + (d_max - d_min) * t;
  }
  d.front() = d_min;
  d.back() = d_max;
  return d;
}

void ExperimentSpec::validate() const {
  try {
    true_params.validate();
  } catch (const DomainError& e) {
    throw SpecError(std::string("true_params: ") + e.what());
  }
  if (!(d0 > 0.0)) throw SpecError("d0 must be positive");
  if (!(grid.d_min >= d0)) throw SpecError("d_min must be >= d0");
  if (!(grid.d_max >= grid.d_min) || !std::isfinite(grid.d_max)) {
    throw SpecError("d_max must be finite and >= d_min");
  }
  if (grid.count < 3) throw SpecError("distance count must be at least 3");
  if (std::isnan(c)) throw SpecError("censoring level must not be NaN");
  if (replicates < 1) throw SpecError("replicates must be at least 1");
  if (estimators.empty()) throw SpecError("at least one estimator is required");
}

const EstimatorSummary& ExperimentReport::summary(Estimator estimator) const {
  for (const auto& s : summaries) {
    if (s.estimator == estimator) return s;
  }
  throw SpecError("estimator '" + std::string(to_string(estimator)) + "' was not run");
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t replicate) {
  const auto r = static_cast<std::uint64_t>(replicate);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

double censoring_level_for_fraction(const PathlossParams& params, double d0,
                                    const std::vector<double>& distances, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw SpecError("target fraction must be in (0, 1)");
  if (distances.empty()) throw SpecError("no distances");
  auto expected = [&](double c) {
    double sum = 0.0;
    for (double d : distances) sum += censoring_probability(params, d, d0, c);
    return sum / static_cast<double>(distances.size());
  };
  double lo = mean_pathloss(params, distances.front(), d0);
  double hi = lo;
  for (double d : distances) {
    const double mu = mean_pathloss(params, d, d0);
    lo = std::min(lo, mu);
    hi = std::max(hi, mu);
  }
  lo -= 40.0 * params.sigma;
  hi += 40.0 * params.sigma;
  // expected() decreases in c
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (expected(mid) > fraction) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

ReplicateRecord fit_one(Estimator estimator, const Dataset& dataset, const FitOptions& options) {
  ReplicateRecord rec;
  rec.estimator = estimator;
  try {
    if (estimator == Estimator::Tobit) {
      const auto fit = tobit_fit(dataset, options);
      rec.estimate = fit.params;
      rec.converged = fit.converged;
      const auto se = estimate_standard_errors(fit, dataset);
      rec.se_pl_d0 = se.se_pl_d0;
      rec.se_n = se.se_n;
      rec.se_sigma_sq = se.se_sigma_sq;
    } else {
      const auto mode = estimator == Estimator::OlsSubstitute ? CensoredHandling::SubstituteC
                                                              : CensoredHandling::DropCensored;
      const auto fit = ols_fit(dataset, mode);
      rec.estimate = fit.params;
      rec.converged = true;
      rec.se_pl_d0 = fit.se_pl_d0;
      rec.se_n = fit.se_n;
    }
    rec.ok = true;
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

Moments moments(const std::vector<double>& values, double truth) {
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  const auto count = static_cast<double>(values.size());
  m.mean = sum / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / (count - 1.0));
  }
  m.bias = m.mean - truth;
  m.se_of_mean = m.std / std::sqrt(count);
  return m;
}

std::optional<double> mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

EstimatorSummary summarize(Estimator estimator, const std::vector<ReplicateRecord>& records,
                           const PathlossParams& truth) {
  EstimatorSummary s;
  s.estimator = estimator;
  std::vector<double> pl, n, sigma, se_pl, se_n, se_s2;
  for (const auto& r : records) {
    if (r.estimator != estimator) continue;
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ++s.fits;
    if (!r.converged) ++s.not_converged;
    pl.push_back(r.estimate.pl_d0);
    n.push_back(r.estimate.n);
    sigma.push_back(r.estimate.sigma);
    if (r.se_pl_d0) se_pl.push_back(*r.se_pl_d0);
    if (r.se_n) se_n.push_back(*r.se_n);
    if (r.se_sigma_sq) se_s2.push_back(*r.se_sigma_sq);
  }
  s.pl_d0 = moments(pl, truth.pl_d0);
  s.n = moments(n, truth.n);
  s.sigma = moments(sigma, truth.sigma);
  s.mean_se_pl_d0 = mean_of(se_pl);
  s.mean_se_n = mean_of(se_n);
  s.mean_se_sigma_sq = mean_of(se_s2);
  if (s.fits > 1 && s.mean_se_pl_d0 && *s.mean_se_pl_d0 > 0.0) {
    s.calibration_pl_d0 = s.pl_d0.std / *s.mean_se_pl_d0;
  }
  if (s.fits > 1 && s.mean_se_n && *s.mean_se_n > 0.0) {
    s.calibration_n = s.n.std / *s.mean_se_n;
  }
  return s;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto distances = spec.grid.distances();
  const std::size_t n_est = spec.estimators.size();

  ExperimentReport report;
  report.spec = spec;
  report.records.resize(spec.replicates * n_est);
  std::vector<double> censored_fraction(spec.replicates, 0.0);

  auto run_replicate = [&](std::size_t r) {
    const auto raw =
        generate_synthetic(spec.true_params, distances, spec.d0, replicate_seed(spec.seed, r));
    const auto dataset = apply_censoring(raw, spec.c, spec.d0);
    censored_fraction[r] = dataset.censored_fraction();
    for (std::size_t e = 0; e < n_est; ++e) {
      auto rec = fit_one(spec.estimators[e], dataset, spec.fit_options);
      rec.replicate = r;
      report.records[r * n_est + e] = std::move(rec);
    }
  };

  const unsigned threads = std::max(1u, spec.threads);
  if (threads == 1) {
    for (std::size_t r = 0; r < spec.replicates; ++r) run_replicate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < spec.replicates; r = next++) run_replicate(r);
      });
    }
  }

  double fraction_sum = 0.0;
  for (double f : censored_fraction) fraction_sum += f;
  report.mean_censored_fraction = fraction_sum / static_cast<double>(spec.replicates);

  std::size_t total_fits = 0;
  for (auto estimator : spec.estimators) {
    report.summaries.push_back(summarize(estimator, report.records, spec.true_params));
    total_fits += report.summaries.back().fits;
  }
  if (total_fits == 0) throw AllReplicatesFailed("no replicate produced a fit");
  return report;
}

}  // namespace censpl
