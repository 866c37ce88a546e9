#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "censpl/model.hpp"
#include "censpl/tobit.hpp"

namespace censpl {

enum class Spacing { Log, Linear };

std::string_view to_string(Spacing spacing);
Spacing spacing_from_string(std::string_view name);

struct DistanceGrid {
  Spacing spacing = Spacing::Log;
  double d_min = 10.0;   // m
  double d_max = 1000.0; // m
  std::size_t count = 500;

  // Endpoints included; both spacings are exact at d_min and d_max.
  std::vector<double> distances() const;
};

enum class Estimator { OlsSubstitute, OlsDrop, Tobit };

std::string_view to_string(Estimator estimator);
Estimator estimator_from_string(std::string_view name);

struct ExperimentSpec {
  PathlossParams true_params{67.41, 2.0, 4.0};
  double d0 = 10.0;  // m
  DistanceGrid grid;
  double c = kNoCensoring;  // dB
  std::size_t replicates = 100;
  std::uint64_t seed = 1;
  std::vector<Estimator> estimators{Estimator::OlsSubstitute, Estimator::Tobit};
  FitOptions fit_options;
  // Worker threads; the report does not depend on this.
  unsigned threads = 1;

  // Throws SpecError.
  void validate() const;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;          // sample standard deviation across replicates
  double bias = 0.0;         // mean - true value
  double se_of_mean = 0.0;   // std / sqrt(fits)
};

struct EstimatorSummary {
  Estimator estimator = Estimator::Tobit;
  std::size_t fits = 0;
  std::size_t failures = 0;
  std::size_t not_converged = 0;
  Moments pl_d0;
  Moments n;
  Moments sigma;
  // Mean reported standard errors and the calibration ratio
  // (empirical std / mean reported SE), from the asymptotic variance for
  // Tobit and from the closed form for OLS.
  std::optional<double> mean_se_pl_d0;
  std::optional<double> mean_se_n;
  std::optional<double> mean_se_sigma_sq;
  std::optional<double> calibration_pl_d0;
  std::optional<double> calibration_n;
};

struct ReplicateRecord {
  std::size_t replicate = 0;
  Estimator estimator = Estimator::Tobit;
  bool ok = false;
  std::string error;
  PathlossParams estimate;
  bool converged = false;
  std::optional<double> se_pl_d0;
  std::optional<double> se_n;
  std::optional<double> se_sigma_sq;
};

struct ExperimentReport {
  ExperimentSpec spec;
  double mean_censored_fraction = 0.0;
  std::vector<EstimatorSummary> summaries;  // in spec.estimators order
  // replicates x estimators records, replicate-major.
  std::vector<ReplicateRecord> records;

  const EstimatorSummary& summary(Estimator estimator) const;
};

// Seed of replicate r: std::seed_seq over the 32-bit halves of the experiment
// seed and of r, folded into 64 bits.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t replicate);

// Censoring level at which the expected censored fraction over `distances`
// equals `fraction` (0 < fraction < 1), by bisection.
double censoring_level_for_fraction(const PathlossParams& params, double d0,
                                    const std::vector<double>& distances, double fraction);

// Failed replicates (e.g. AllCensored) are recorded and left out of the
// moments. Throws SpecError for an invalid spec and AllReplicatesFailed when
// no estimator produced a single fit.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace censpl
