#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "censpl/model.hpp"
#include "censpl/montecarlo.hpp"
#include "censpl/tobit.hpp"

namespace censpl::testing {

inline const PathlossParams kBaseTruth{67.41, 2.0, 4.0};
inline constexpr double kBaseD0 = 10.0;

inline std::vector<double> base_distances(std::size_t count = 500) {
  return DistanceGrid{Spacing::Log, 10.0, 1000.0, count}.distances();
}

// Synthetic set with the far tail censored at `fraction` expected coverage.
inline Dataset base_dataset(std::uint64_t seed, double fraction = 0.3,
                                  std::size_t count = 500) {
  const auto distances = base_distances(count);
  const double c =
      censoring_level_for_fraction(kBaseTruth, kBaseD0, distances, fraction);
  const auto raw = generate_synthetic(kBaseTruth, distances, kBaseD0, seed);
  return apply_censoring(raw, c, kBaseD0);
}

// Central differences of the NLL in the coordinates the fit optimizes:
// (PL(d0), n, ln sigma), or (n, ln sigma) with PL(d0) fixed. Step is 1e-4
// times max(|x_i|, 1).
inline std::vector<double> nll_gradient(const TobitFit& fit, const Dataset& dataset) {
  const bool fixed = fit.fixed_pl_d0.has_value();
  std::vector<double> x;
  if (!fixed) x.push_back(fit.params.pl_d0);
  x.push_back(fit.params.n);
  x.push_back(std::log(fit.params.sigma));
  auto nll = [&](const std::vector<double>& v) {
    const std::size_t k = fixed ? 0 : 1;
    const double pl = fixed ? *fit.fixed_pl_d0 : v[0];
    return tobit_nll({pl, v[k], std::exp(v[k + 1])}, dataset);
  };
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-4 * std::max(std::fabs(x[i]), 1.0);
    auto up = x;
    auto down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (nll(up) - nll(down)) / (2.0 * h);
  }
  return g;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace censpl::testing
