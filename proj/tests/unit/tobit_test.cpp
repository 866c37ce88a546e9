#include "censpl/tobit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "censpl/avar.hpp"
#include "censpl/errors.hpp"
#include "censpl/ols.hpp"
#include "support/fixtures.hpp"

namespace censpl {
namespace {

using testing::base_dataset;
using testing::base_distances;
using testing::kBaseD0;
using testing::kBaseTruth;

Dataset shifted(const Dataset& ds, double k) {
  std::vector<CensoredSample> s;
  for (const auto& x : ds.samples()) s.push_back({x.distance, x.value + k, x.censored});
  return Dataset(std::move(s), ds.d0(), ds.c() + k);
}

Dataset rescaled(const Dataset& ds, double factor) {
  std::vector<CensoredSample> s;
  for (const auto& x : ds.samples()) s.push_back({x.distance * factor, x.value, x.censored});
  return Dataset(std::move(s), ds.d0() * factor, ds.c());
}

double gaussian_nll(const PathlossParams& p, const Dataset& ds) {
  double rss = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double r = ds[i].value - p.pl_d0 - p.n * ds.regressor(i);
    rss += r * r;
  }
  const double l = static_cast<double>(ds.size());
  return l * std::log(p.sigma) + l * 0.5 * std::log(2.0 * std::numbers::pi) +
         rss / (2.0 * p.sigma * p.sigma);
}

TEST(TobitNll, SingleExactUncensoredSample) {
  const Dataset ds({{100.0, 80.0, false}}, 10.0, kNoCensoring);
  EXPECT_NEAR(tobit_nll({60.0, 2.0, 1.0}, ds), 0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(tobit_nll({60.0, 2.0, 1.0}, ds), 0.9189385, 1e-7);
}

TEST(TobitNll, SingleCensoredSampleAtMean) {
  const Dataset ds({{100.0, 80.0, true}}, 10.0, 80.0);
  EXPECT_NEAR(tobit_nll({60.0, 2.0, 3.0}, ds), std::log(2.0), 1e-15);
}

TEST(TobitNll, ReducesToGaussianWithoutCensoring) {
  const auto raw = generate_synthetic(kBaseTruth, base_distances(), kBaseD0, 4);
  const auto ds = apply_censoring(raw, kNoCensoring, kBaseD0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pl(50.0, 80.0), n(1.0, 3.5), sigma(1.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const PathlossParams p{pl(rng), n(rng), sigma(rng)};
    EXPECT_NEAR(tobit_nll(p, ds), gaussian_nll(p, ds), 1e-10);
  }
}

TEST(TobitNll, FiniteForExtremeScores) {
  // Censored sample 300 standard deviations above the mean and one far below.
  const Dataset ds({{10.0, 50.0, false}, {10.0, 360.0, true}}, 10.0, 360.0);
  EXPECT_TRUE(std::isfinite(tobit_nll({60.0, 2.0, 1.0}, ds)));
  const Dataset low({{10.0, -250.0, false}, {10.0, -240.0, true}}, 10.0, -240.0);
  EXPECT_TRUE(std::isfinite(tobit_nll({60.0, 2.0, 1.0}, low)));
}

TEST(TobitNll, RejectsNonPositiveSigma) {
  const Dataset ds({{100.0, 80.0, false}}, 10.0, kNoCensoring);
  EXPECT_THROW(tobit_nll({60.0, 2.0, 0.0}, ds), DomainError);
  EXPECT_THROW(tobit_nll({60.0, 2.0, -1.0}, ds), DomainError);
}

TEST(TobitFit, MatchesOlsWithoutCensoring) {
  const auto raw = generate_synthetic(kBaseTruth, base_distances(), kBaseD0, 12);
  const auto ds = apply_censoring(raw, kNoCensoring, kBaseD0);
  const auto fit = tobit_fit(ds);
  const auto ols = ols_fit(ds);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.params.pl_d0, ols.params.pl_d0, 1e-3);
  EXPECT_NEAR(fit.params.n, ols.params.n, 1e-3);
  double rss = 0.0;
  for (double r : ols.residuals) rss += r * r;
  const double ml_var = rss / static_cast<double>(ds.size());
  EXPECT_NEAR(fit.params.sigma * fit.params.sigma / ml_var, 1.0, 0.01);
  EXPECT_EQ(fit.n_censored, 0u);
  EXPECT_EQ(fit.n_uncensored, ds.size());
}

TEST(TobitFit, RecoversBaseScenarioParameters) {
  const auto ds = base_dataset(7);
  const auto fit = tobit_fit(ds);
  ASSERT_TRUE(fit.converged);
  const auto se = estimate_standard_errors(fit, ds);
  ASSERT_TRUE(se.se_pl_d0.has_value());
  EXPECT_NEAR(fit.params.n, 2.0, 3.0 * se.se_n);
  // delta method: se(sigma) = se(sigma^2) / (2 sigma)
  EXPECT_NEAR(fit.params.sigma, 4.0, 3.0 * se.se_sigma_sq / (2.0 * fit.params.sigma));
  EXPECT_LT(ols_fit(ds, CensoredHandling::SubstituteC).params.n, fit.params.n);
  EXPECT_GT(ds.censored_count(), 0u);
  EXPECT_EQ(fit.n_censored + fit.n_uncensored, ds.size());
  EXPECT_GT(fit.params.sigma, 0.0);
  EXPECT_TRUE(std::isfinite(fit.nll));
  EXPECT_EQ(fit.init, ols_fit(ds).params);
}

TEST(TobitFit, FixedFreeSpaceReference) {
  const double reference = fspl_reference(5.6e9, kBaseD0);
  const PathlossParams truth{reference, 2.0, 4.0};
  const auto distances = base_distances();
  const double c = censoring_level_for_fraction(truth, kBaseD0, distances, 0.3);
  const auto ds =
      apply_censoring(generate_synthetic(truth, distances, kBaseD0, 31), c, kBaseD0);
  FitOptions options;
  options.fixed_pl_d0 = reference;
  const auto fit = tobit_fit(ds, options);
  ASSERT_TRUE(fit.converged);
  EXPECT_EQ(fit.params.pl_d0, reference);
  EXPECT_EQ(fit.fixed_pl_d0, reference);
  const auto se = estimate_standard_errors(fit, ds);
  EXPECT_FALSE(se.se_pl_d0.has_value());
  EXPECT_NEAR(fit.params.n, 2.0, 3.0 * se.se_n);
  EXPECT_LT(testing::max_abs(testing::nll_gradient(fit, ds)), 1e-3);
}

TEST(TobitFit, StationaryAtOptimum) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto ds = base_dataset(seed);
    const auto fit = tobit_fit(ds);
    ASSERT_TRUE(fit.converged) << seed;
    const auto g = testing::nll_gradient(fit, ds);
    ASSERT_EQ(g.size(), 3u);
    for (double v : g) EXPECT_LT(std::fabs(v), 1e-3) << seed;
  }
}

TEST(TobitFit, BestValueNeverIncreases) {
  const auto fit = tobit_fit(base_dataset(3));
  ASSERT_FALSE(fit.best_history.empty());
  for (std::size_t i = 1; i < fit.best_history.size(); ++i) {
    EXPECT_LE(fit.best_history[i], fit.best_history[i - 1]);
  }
  EXPECT_EQ(fit.best_history.back(), fit.nll);
}

TEST(TobitFit, Deterministic) {
  const auto ds = base_dataset(5);
  const auto a = tobit_fit(ds);
  const auto b = tobit_fit(ds);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.nll, b.nll);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(TobitFit, ShiftEquivariance) {
  const auto ds = base_dataset(21);
  const auto base = tobit_fit(ds);
  const auto base_ols = ols_fit(ds);
  for (double k : {-20.0, 3.5, 41.0}) {
    const auto moved = shifted(ds, k);
    const auto fit = tobit_fit(moved);
    EXPECT_NEAR(fit.params.pl_d0, base.params.pl_d0 + k, 1e-6) << k;
    EXPECT_NEAR(fit.params.n, base.params.n, 1e-6) << k;
    EXPECT_NEAR(fit.params.sigma, base.params.sigma, 1e-6) << k;
    const auto ols = ols_fit(moved);
    EXPECT_NEAR(ols.params.pl_d0, base_ols.params.pl_d0 + k, 1e-6) << k;
    EXPECT_NEAR(ols.params.n, base_ols.params.n, 1e-6) << k;
    EXPECT_NEAR(ols.params.sigma, base_ols.params.sigma, 1e-6) << k;
  }
}

TEST(TobitFit, DistanceUnitInvariance) {
  const auto ds = base_dataset(22);
  const auto base = tobit_fit(ds);
  // Power-of-two factors rescale d and d0 exactly, so d / d0 is unchanged.
  for (double factor : {0.25, 8.0, 1024.0}) {
    const auto fit = tobit_fit(rescaled(ds, factor));
    EXPECT_NEAR(fit.params.pl_d0, base.params.pl_d0, 1e-9) << factor;
    EXPECT_NEAR(fit.params.n, base.params.n, 1e-9) << factor;
    EXPECT_NEAR(fit.params.sigma, base.params.sigma, 1e-9) << factor;
  }
  // Other factors perturb d / d0 in the last bit; the optimum then moves
  // within the band where the NLL is flat to rounding.
  for (double factor : {1e-3, 3.28084}) {
    const auto fit = tobit_fit(rescaled(ds, factor));
    EXPECT_NEAR(fit.params.pl_d0, base.params.pl_d0, 1e-6) << factor;
    EXPECT_NEAR(fit.params.n, base.params.n, 1e-6) << factor;
    EXPECT_NEAR(fit.params.sigma, base.params.sigma, 1e-6) << factor;
  }
}

TEST(TobitFit, Errors) {
  const Dataset all_censored({{10.0, 80.0, true}, {20.0, 80.0, true}, {40.0, 80.0, true}}, 10.0,
                             80.0);
  EXPECT_THROW(tobit_fit(all_censored), AllCensored);
  const Dataset two({{10.0, 60.0, false}, {20.0, 70.0, false}}, 10.0, kNoCensoring);
  EXPECT_THROW(tobit_fit(two), TooFewSamples);
  const Dataset one_distance(
      {{20.0, 60.0, false}, {20.0, 62.0, false}, {40.0, 80.0, true}, {80.0, 80.0, true}}, 10.0,
      80.0);
  EXPECT_THROW(tobit_fit(one_distance), DegenerateDesign);
  FitOptions fixed;
  fixed.fixed_pl_d0 = 55.0;
  EXPECT_NO_THROW(tobit_fit(one_distance, fixed));
  fixed.fixed_pl_d0 = std::nan("");
  EXPECT_THROW(tobit_fit(base_dataset(1), fixed), DomainError);
}

TEST(TobitFit, CollinearStartFallsBackToUnitSigma) {
  const Dataset ds({{10.0, 60.0, false}, {100.0, 80.0, false}, {1000.0, 100.0, false},
                    {100.0, 79.0, false}},
                   10.0, kNoCensoring);
  EXPECT_NO_THROW(tobit_fit(ds));
  const Dataset exact({{10.0, 60.0, false}, {100.0, 80.0, false}, {1000.0, 100.0, false}}, 10.0,
                      kNoCensoring);
  const auto fit = tobit_fit(exact);
  EXPECT_EQ(fit.init.sigma, 1.0);
}

TEST(TobitFit, HeavyCensoringWarns) {
  const auto ds = base_dataset(9, 0.95);
  ASSERT_GT(ds.censored_fraction(), 0.9);
  const auto fit = tobit_fit(ds);
  bool warned = false;
  for (const auto& w : fit.warnings) warned = warned || w.find("0.9") != std::string::npos;
  EXPECT_TRUE(warned);
  EXPECT_TRUE(base_dataset(9).censored_fraction() < 0.9);
  EXPECT_TRUE(tobit_fit(base_dataset(9)).warnings.empty());
}

TEST(TobitFit, IterationCapIsFlagNotError) {
  FitOptions options;
  options.optimizer.max_iterations = 3;
  options.restart = false;
  const auto fit = tobit_fit(base_dataset(2), options);
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.restarts, 0);
  EXPECT_FALSE(fit.warnings.empty());
}

}  // namespace
}  // namespace censpl
