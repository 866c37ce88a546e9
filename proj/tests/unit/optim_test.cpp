#include "censpl/optim.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "censpl/errors.hpp"

namespace censpl::optim {
namespace {

double rosenbrock(std::span<const double> x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

struct DiagonalQuadratic {
  // (x - a)^T D (x - a) with D = diag(1, 10, 100)
  std::array<double, 3> a{1.0, -2.0, 0.5};
  double operator()(std::span<const double> x) const {
    const double d[3] = {x[0] - a[0], x[1] - a[1], x[2] - a[2]};
    return d[0] * d[0] + 10.0 * d[1] * d[1] + 100.0 * d[2] * d[2];
  }
};

TEST(NelderMead, OneDimensionalParabola) {
  const std::vector<double> x0{0.0};
  const auto r = nelder_mead([](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); },
                             x0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x_min[0], 3.0, 1e-6);
  EXPECT_LT(r.f_min, 1e-10);
}

TEST(NelderMead, Rosenbrock) {
  const std::vector<double> x0{-1.2, 1.0};
  NelderMeadOptions opt;
  opt.max_iterations = 5000;
  const auto r = nelder_mead(rosenbrock, x0, opt);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x_min[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x_min[1], 1.0, 1e-4);
}

TEST(NelderMead, DiagonalQuadraticFromRandomStarts) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    DiagonalQuadratic f;
    f.a = {u(rng), u(rng), u(rng)};
    const std::vector<double> x0{u(rng), u(rng), u(rng)};
    const auto r = nelder_mead(f, x0);
    EXPECT_TRUE(r.converged) << trial;
    EXPECT_LE(r.iterations, 2000);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.x_min[j], f.a[j], 1e-6) << trial;
  }
}

TEST(NelderMead, SmallCoordinatesUseMinimumStep) {
  NelderMeadOptions opt;
  opt.max_iterations = 0;
  const auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const auto r = nelder_mead(f, std::vector<double>{0.001, 1.0}, opt);
  bool small = false, large = false;
  for (const auto& v : r.final_simplex.vertices) {
    small = small || (v.point[0] == 0.001 + 0.00025 && v.point[1] == 1.0);
    large = large || (v.point[0] == 0.001 && v.point[1] == 1.05);
  }
  EXPECT_TRUE(small);
  EXPECT_TRUE(large);
}

TEST(NelderMead, BestValueNeverIncreases) {
  const std::vector<double> x0{-1.2, 1.0};
  const auto r = nelder_mead(rosenbrock, x0);
  ASSERT_EQ(r.best_history.size(), static_cast<std::size_t>(r.iterations) + 1);
  for (std::size_t i = 1; i < r.best_history.size(); ++i) {
    EXPECT_LE(r.best_history[i], r.best_history[i - 1]);
  }
  EXPECT_EQ(r.best_history.back(), r.f_min);
}

TEST(NelderMead, Deterministic) {
  const std::vector<double> x0{3.0, -4.0, 7.0};
  const auto a = nelder_mead(DiagonalQuadratic{}, x0);
  const auto b = nelder_mead(DiagonalQuadratic{}, x0);
  EXPECT_EQ(a.x_min, b.x_min);
  EXPECT_EQ(a.f_min, b.f_min);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(NelderMead, InitialSimplexSteps) {
  NelderMeadOptions opt;
  opt.max_iterations = 0;
  const auto r = nelder_mead(DiagonalQuadratic{}, std::vector<double>{2.0, 0.0, -4.0}, opt);
  EXPECT_EQ(r.iterations, 0);
  ASSERT_EQ(r.final_simplex.vertices.size(), 4u);
  std::vector<std::vector<double>> expected{
      {2.0, 0.0, -4.0}, {2.1, 0.0, -4.0}, {2.0, 0.00025, -4.0}, {2.0, 0.0, -3.8}};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& v : r.final_simplex.vertices) found = found || v.point == e;
    EXPECT_TRUE(found);
  }
  EXPECT_EQ(r.evaluations, 4);
}

TEST(NelderMead, VerticesSortedBestFirst) {
  const auto r = nelder_mead(rosenbrock, std::vector<double>{0.5, 0.5});
  const auto& v = r.final_simplex.vertices;
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(v[i - 1].value, v[i].value);
  EXPECT_EQ(v.front().point, r.x_min);
}

TEST(NelderMead, NonFiniteStartThrows) {
  const auto nan_objective = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_THROW(nelder_mead(nan_objective, std::vector<double>{1.0}), NonFiniteObjective);
}

TEST(NelderMead, NonFiniteTrialPointsAreRejected) {
  // Infinite barrier below zero; the minimum sits on the feasible side.
  const auto barrier = [](std::span<const double> x) {
    if (x[0] <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return x[0] - std::log(x[0]);
  };
  const auto r = nelder_mead(barrier, std::vector<double>{5.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x_min[0], 1.0, 1e-5);
}

TEST(NelderMead, DimensionLimits) {
  const auto f = [](std::span<const double>) { return 0.0; };
  EXPECT_THROW(nelder_mead(f, std::vector<double>{}), DomainError);
  EXPECT_THROW(nelder_mead(f, std::vector<double>(9, 1.0)), DomainError);
}

TEST(NelderMead, IterationCapReportsNotConverged) {
  NelderMeadOptions opt;
  opt.max_iterations = 5;
  const auto r = nelder_mead(rosenbrock, std::vector<double>{-1.2, 1.0}, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5);
}

}  // namespace
}  // namespace censpl::optim
