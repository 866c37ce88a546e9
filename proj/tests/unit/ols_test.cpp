#include "censpl/ols.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "censpl/errors.hpp"

namespace censpl {
namespace {

// Regressor 0, 10, 20 dB at d0 = 1.
Dataset hand_dataset() {
  return Dataset({{1.0, 61.0, false}, {10.0, 79.0, false}, {100.0, 103.0, false}}, 1.0,
                 kNoCensoring);
}

// Shrinking-bracket grid search on a convex function of one variable.
template <class F>
double grid_refine(F&& f, double lo, double hi) {
  while (hi - lo > 1e-9) {
    const int points = 20;
    const double step = (hi - lo) / points;
    int best = 0;
    double best_value = f(lo);
    for (int i = 1; i <= points; ++i) {
      const double v = f(lo + i * step);
      if (v < best_value) best_value = v, best = i;
    }
    const double centre = lo + best * step;
    lo = centre - step;
    hi = centre + step;
  }
  return 0.5 * (lo + hi);
}

// Brute-force least squares: grid search over the slope of the residual sum
// of squares minimized over the intercept by a nested grid search.
std::array<double, 2> grid_minimizer(const Dataset& ds) {
  auto rss = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double r = ds[i].value - a - b * ds.regressor(i);
      s += r * r;
    }
    return s;
  };
  auto best_a = [&](double b) { return grid_refine([&](double a) { return rss(a, b); }, 0.0, 200.0); };
  const double b = grid_refine([&](double bb) { return rss(best_a(bb), bb); }, -20.0, 20.0);
  return {best_a(b), b};
}

Dataset random_uncensored(std::mt19937_64& rng, std::size_t count, double d0) {
  std::uniform_real_distribution<double> ratio(1.0, 300.0);
  std::normal_distribution<double> noise(0.0, 3.0);
  std::vector<CensoredSample> s;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = d0 * ratio(rng);
    s.push_back({d, 60.0 + 2.5 * std::log10(d / d0) + noise(rng), false});
  }
  return Dataset(std::move(s), d0, kNoCensoring);
}

TEST(OlsFit, HandOracle) {
  const auto fit = ols_fit(hand_dataset());
  EXPECT_NEAR(fit.params.n, 2.1, 1e-12);
  EXPECT_NEAR(fit.params.pl_d0, 60.0, 1e-12);
  EXPECT_NEAR(fit.sigma_sq_hat, 3.0, 1e-12);
  EXPECT_NEAR(fit.params.sigma, std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(fit.se_n, std::sqrt(3.0 / 200.0), 1e-12);
  EXPECT_NEAR(fit.se_pl_d0, std::sqrt(3.0 * 5.0 / 6.0), 1e-12);
  EXPECT_NEAR(fit.se_n, 0.12247, 1e-5);
  EXPECT_NEAR(fit.se_pl_d0, 1.5811, 1e-4);
  EXPECT_DOUBLE_EQ(fit.x_bar, 10.0);
  EXPECT_DOUBLE_EQ(fit.s_xx, 200.0);
  EXPECT_EQ(fit.count, 3u);
  ASSERT_EQ(fit.residuals.size(), 3u);
  EXPECT_NEAR(fit.residuals[0], 1.0, 1e-12);
  EXPECT_NEAR(fit.residuals[1], -2.0, 1e-12);
  EXPECT_NEAR(fit.residuals[2], 1.0, 1e-12);
}

TEST(OlsFit, CollinearDataHasZeroSpread) {
  const Dataset ds({{10.0, 60.0, false}, {100.0, 80.0, false}, {1000.0, 100.0, false}}, 10.0,
                   kNoCensoring);
  const auto fit = ols_fit(ds);
  EXPECT_NEAR(fit.params.pl_d0, 60.0, 1e-12);
  EXPECT_NEAR(fit.params.n, 2.0, 1e-12);
  EXPECT_NEAR(fit.sigma_sq_hat, 0.0, 1e-20);
  EXPECT_NEAR(fit.se_n, 0.0, 1e-10);
  EXPECT_NEAR(fit.se_pl_d0, 0.0, 1e-10);
}

TEST(OlsFit, Errors) {
  EXPECT_THROW(ols_fit(Dataset({{10.0, 60.0, false}, {20.0, 70.0, false}}, 10.0, kNoCensoring)),
               TooFewSamples);
  EXPECT_THROW(ols_fit(Dataset({{20.0, 60.0, false}, {20.0, 70.0, false}, {20.0, 65.0, false}},
                               10.0, kNoCensoring)),
               DegenerateDesign);
  const Dataset mostly_censored(
      {{10.0, 60.0, false}, {20.0, 70.0, false}, {30.0, 80.0, true}, {40.0, 80.0, true}}, 10.0,
      80.0);
  EXPECT_NO_THROW(ols_fit(mostly_censored, CensoredHandling::SubstituteC));
  EXPECT_THROW(ols_fit(mostly_censored, CensoredHandling::DropCensored), TooFewSamples);
}

TEST(OlsFit, DropExcludesCensoredRows) {
  const Dataset ds({{10.0, 60.0, false},
                    {20.0, 63.0, false},
                    {40.0, 67.0, false},
                    {80.0, 70.0, true},
                    {160.0, 70.0, true}},
                   10.0, 70.0);
  const auto drop = ols_fit(ds, CensoredHandling::DropCensored);
  const auto sub = ols_fit(ds, CensoredHandling::SubstituteC);
  EXPECT_EQ(drop.count, 3u);
  EXPECT_EQ(sub.count, 5u);
  EXPECT_EQ(drop.residuals.size(), 3u);
  EXPECT_EQ(drop.mode, CensoredHandling::DropCensored);
  const Dataset kept({{10.0, 60.0, false}, {20.0, 63.0, false}, {40.0, 67.0, false}}, 10.0,
                     kNoCensoring);
  EXPECT_EQ(drop.params, ols_fit(kept).params);
}

TEST(OlsFit, NormalEquations) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ds = random_uncensored(rng, 5 + trial % 40, 10.0);
    const auto fit = ols_fit(ds);
    double g0 = 0.0, g1 = 0.0, ynorm = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      g0 += fit.residuals[i];
      g1 += ds.regressor(i) * fit.residuals[i];
      ynorm += ds[i].value * ds[i].value;
    }
    ynorm = std::sqrt(ynorm);
    EXPECT_LT(std::fabs(g0), 1e-9 * ynorm);
    EXPECT_LT(std::fabs(g1), 1e-9 * ynorm);
  }
}

TEST(OlsFit, MatchesGridMinimizer) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = random_uncensored(rng, 3 + trial % 10, 1.0);
    const auto fit = ols_fit(ds);
    const auto grid = grid_minimizer(ds);
    EXPECT_NEAR(fit.params.pl_d0, grid[0], 1e-4) << trial;
    EXPECT_NEAR(fit.params.n, grid[1], 1e-4) << trial;
  }
}

TEST(OlsFit, SamplingDistributionOfSlope) {
  const PathlossParams truth{67.41, 2.0, 4.0};
  std::vector<double> distances;
  for (int i = 0; i < 40; ++i) distances.push_back(10.0 * std::pow(100.0, i / 39.0));
  const int reps = 2000;
  std::vector<double> slopes;
  double s_xx = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto raw = generate_synthetic(truth, distances, 10.0, 1000 + r);
    const auto fit = ols_fit(apply_censoring(raw, kNoCensoring, 10.0));
    slopes.push_back(fit.params.n);
    s_xx = fit.s_xx;
  }
  double mean = 0.0;
  for (double s : slopes) mean += s;
  mean /= reps;
  double var = 0.0;
  for (double s : slopes) var += (s - mean) * (s - mean);
  const double sd = std::sqrt(var / (reps - 1));
  const double expected = truth.sigma / std::sqrt(s_xx);
  EXPECT_NEAR(sd / expected, 1.0, 0.07);
  EXPECT_NEAR(mean, truth.n, 3.0 * sd / std::sqrt(reps));
}

TEST(OlsFit, ModesAgreeWithoutCensoring) {
  std::mt19937_64 rng(3);
  const auto ds = random_uncensored(rng, 30, 10.0);
  const auto a = ols_fit(ds, CensoredHandling::SubstituteC);
  const auto b = ols_fit(ds, CensoredHandling::DropCensored);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.se_n, b.se_n);
  EXPECT_EQ(a.se_pl_d0, b.se_pl_d0);
  EXPECT_EQ(a.residuals, b.residuals);
}

TEST(OlsStandardErrors, MatchesFitFields) {
  const auto fit = ols_fit(hand_dataset());
  const auto se = ols_standard_errors(fit, fit.count);
  EXPECT_EQ(se.se_n, fit.se_n);
  EXPECT_EQ(se.se_pl_d0, fit.se_pl_d0);
}

TEST(OlsStandardErrors, DistanceScalingTranslatesRegressor) {
  std::vector<CensoredSample> near{{1.0, 61.0, false}, {10.0, 79.0, false}, {100.0, 103.0, false}};
  std::vector<CensoredSample> far;
  for (const auto& s : near) far.push_back({s.distance * 10.0, s.value, false});
  const auto a = ols_fit(Dataset(near, 1.0, kNoCensoring));
  const auto b = ols_fit(Dataset(far, 1.0, kNoCensoring));
  EXPECT_NEAR(b.x_bar, a.x_bar + 10.0, 1e-12);
  EXPECT_NEAR(b.s_xx, a.s_xx, 1e-9);
  EXPECT_NEAR(b.se_n, a.se_n, 1e-12);
  EXPECT_NEAR(b.params.n, a.params.n, 1e-12);
}

TEST(CensoredHandling, StringRoundTrip) {
  for (auto m : {CensoredHandling::SubstituteC, CensoredHandling::DropCensored}) {
    EXPECT_EQ(censored_handling_from_string(to_string(m)), m);
  }
  EXPECT_THROW(censored_handling_from_string("bogus"), Error);
}

}  // namespace
}  // namespace censpl
