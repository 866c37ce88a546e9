#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace censpl {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kNoCensoring = std::numeric_limits<double>::infinity();

// Log-distance model PL(d) = PL(d0) + 10 n log10(d / d0) + N(0, sigma^2).
struct PathlossParams {
  double pl_d0 = 0.0;  // dB
  double n = 0.0;      // pathloss exponent
  double sigma = 0.0;  // dB, shadowing standard deviation

  // Throws DomainError unless all fields are finite and sigma > 0.
  void validate() const;

  bool operator==(const PathlossParams&) const = default;
};

struct CensoredSample {
  double distance = 0.0;  // m
  double value = 0.0;     // dB; equals the dataset censoring level if censored
  bool censored = false;

  bool operator==(const CensoredSample&) const = default;
};

// A measurement before censoring is applied.
struct RawSample {
  double distance = 0.0;  // m
  double value = 0.0;     // dB

  bool operator==(const RawSample&) const = default;
};

// Ordered samples sharing one reference distance and one censoring level.
// Construction enforces: d0 > 0, at least one sample, every distance >= d0,
// uncensored values < c and censored values == c.
class Dataset {
 public:
  Dataset(std::vector<CensoredSample> samples, double d0, double c,
          std::optional<double> frequency_hz = std::nullopt);

  const std::vector<CensoredSample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const CensoredSample& operator[](std::size_t i) const { return samples_[i]; }

  double d0() const noexcept { return d0_; }
  double c() const noexcept { return c_; }
  const std::optional<double>& frequency_hz() const noexcept { return frequency_hz_; }

  // 10 log10(d_i / d0), the second column of the design matrix.
  double regressor(std::size_t i) const;

  std::size_t censored_count() const noexcept { return censored_count_; }
  std::size_t uncensored_count() const noexcept { return samples_.size() - censored_count_; }
  double censored_fraction() const noexcept {
    return static_cast<double>(censored_count_) / static_cast<double>(samples_.size());
  }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<CensoredSample> samples_;
  double d0_;
  double c_;
  std::optional<double> frequency_hz_;
  std::size_t censored_count_ = 0;
};

// Rows [1, 10 log10(d_i / d0)].
std::vector<std::array<double, 2>> design_matrix(const Dataset& dataset);

// Parameters of the reflected model y_t = c - y = X alpha_t - eps, where
// alpha_t = [c - PL(d0), -n]. Censoring at or above c becomes censoring at or
// below zero.
struct TransformedParams {
  std::array<double, 2> alpha_t{};
  double sigma = 0.0;

  bool operator==(const TransformedParams&) const = default;
};

TransformedParams to_transformed(const PathlossParams& params, double c);
PathlossParams from_transformed(const TransformedParams& tp, double c);

// Distance-dependent mean; throws DomainError if d < d0.
double mean_pathloss(const PathlossParams& params, double d, double d0);

// Free-space pathloss 20 log10(4 pi d0 / lambda) in dB.
double fspl_reference(double frequency_hz, double d0);

// Values are mean_pathloss plus Gaussian shadowing drawn from a
// std::mt19937_64 seeded with `seed`. Output is reproducible for a given
// build; the normal transform belongs to the standard library, so bit
// equality across different standard libraries is not guaranteed.
std::vector<RawSample> generate_synthetic(const PathlossParams& params,
                                          std::span<const double> distances, double d0,
                                          std::uint64_t seed);

// Values >= c are replaced by c and flagged. Order and count are preserved.
Dataset apply_censoring(std::span<const RawSample> values, double c, double d0,
                        std::optional<double> frequency_hz = std::nullopt);

// 1 - Phi((c - mu(d)) / sigma).
double censoring_probability(const PathlossParams& params, double d, double d0, double c);

}  // namespace censpl
