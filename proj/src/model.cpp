#include "censpl/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "censpl/errors.hpp"
#include "censpl/numerics.hpp"

namespace censpl {

void PathlossParams::validate() const {
  if (!std::isfinite(pl_d0) || !std::isfinite(n) || !std::isfinite(sigma)) {
    throw DomainError("pathloss parameters must be finite");
  }
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
}

Dataset::Dataset(std::vector<CensoredSample> samples, double d0, double c,
                 std::optional<double> frequency_hz)
    : samples_(std::move(samples)), d0_(d0), c_(c), frequency_hz_(frequency_hz) {
  if (!(d0_ > 0.0) || !std::isfinite(d0_)) throw InvariantError("d0 must be positive and finite");
  if (std::isnan(c_)) throw InvariantError("censoring level must not be NaN");
  if (frequency_hz_ && !(*frequency_hz_ > 0.0)) throw InvariantError("frequency must be positive");
  if (samples_.empty()) throw InvariantError("dataset must contain at least one sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    const std::string where = "sample " + std::to_string(i) + ": ";
    if (!std::isfinite(s.distance) || s.distance < d0_) {
      throw InvariantError(where + "distance must be finite and >= d0");
    }
    if (s.censored) {
      if (s.value != c_) throw InvariantError(where + "censored value must equal c");
      ++censored_count_;
    } else if (!std::isfinite(s.value) || !(s.value < c_)) {
      throw InvariantError(where + "uncensored value must be finite and below c");
    }
  }
}

double Dataset::regressor(std::size_t i) const {
  return 10.0 * std::log10(samples_[i].distance / d0_);
}

std::vector<std::array<double, 2>> design_matrix(const Dataset& dataset) {
  std::vector<std::array<double, 2>> rows(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) rows[i] = {1.0, dataset.regressor(i)};
  return rows;
}

TransformedParams to_transformed(const PathlossParams& params, double c) {
  return {{c - params.pl_d0, -params.n}, params.sigma};
}

PathlossParams from_transformed(const TransformedParams& tp, double c) {
  return {c - tp.alpha_t[0], -tp.alpha_t[1], tp.sigma};
}

double mean_pathloss(const PathlossParams& params, double d, double d0) {
  if (!(d0 > 0.0) || !(d >= d0)) throw DomainError("distance must satisfy d >= d0 > 0");
  return params.pl_d0 + 10.0 * params.n * std::log10(d / d0);
}

double fspl_reference(double frequency_hz, double d0) {
  if (!(frequency_hz > 0.0) || !(d0 > 0.0)) {
    throw DomainError("frequency and reference distance must be positive");
  }
  const double wavelength = kSpeedOfLight / frequency_hz;
  return 20.0 * std::log10(4.0 * std::numbers::pi * d0 / wavelength);
}

std::vector<RawSample> generate_synthetic(const PathlossParams& params,
                                          std::span<const double> distances, double d0,
                                          std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadowing(0.0, params.sigma);
  std::vector<RawSample> out;
  out.reserve(distances.size());
  for (double d : distances) {
    const double mu = mean_pathloss(params, d, d0);
    out.push_back({d, mu + shadowing(rng)});
  }
  return out;
}

Dataset apply_censoring(std::span<const RawSample> values, double c, double d0,
                        std::optional<double> frequency_hz) {
  std::vector<CensoredSample> samples;
  samples.reserve(values.size());
  for (const auto& v : values) {
    if (v.value >= c) {
      samples.push_back({v.distance, c, true});
    } else {
      samples.push_back({v.distance, v.value, false});
    }
  }
  return Dataset(std::move(samples), d0, c, frequency_hz);
}

double censoring_probability(const PathlossParams& params, double d, double d0, double c) {
  params.validate();
  const double mu = mean_pathloss(params, d, d0);
  return numerics::normal_sf((c - mu) / params.sigma);
}

}  // namespace censpl
