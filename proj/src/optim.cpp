#include "censpl/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "censpl/errors.hpp"

namespace censpl::optim {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

class Evaluator {
 public:
  explicit Evaluator(const Objective& objective) : objective_(objective) {}

  double operator()(std::span<const double> x) {
    ++count_;
    const double f = objective_(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  }

  int count() const noexcept { return count_; }

 private:
  const Objective& objective_;
  int count_ = 0;
};

// x = base + coeff * (base - other)
std::vector<double> affine(const std::vector<double>& base, const std::vector<double>& other,
                           double coeff) {
  std::vector<double> x(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) x[j] = base[j] + coeff * (base[j] - other[j]);
  return x;
}

void sort_vertices(std::vector<Vertex>& vertices) {
  std::stable_sort(vertices.begin(), vertices.end(),
                   [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
}

bool within_tolerance(const std::vector<Vertex>& v, const NelderMeadOptions& options) {
  const auto& best = v.front();
  double x_spread = 0.0;
  double f_spread = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    f_spread = std::max(f_spread, std::fabs(v[i].value - best.value));
    for (std::size_t j = 0; j < best.point.size(); ++j) {
      x_spread = std::max(x_spread, std::fabs(v[i].point[j] - best.point[j]));
    }
  }
  return x_spread <= options.x_tolerance && f_spread <= options.f_tolerance;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim < 1 || dim > 8) throw DomainError("nelder_mead supports 1 to 8 dimensions");

  Evaluator eval(objective);
  SimplexState state;
  {
    std::vector<double> start(x0.begin(), x0.end());
    const double f0 = objective(start);
    if (!std::isfinite(f0)) throw NonFiniteObjective("objective is not finite at the start point");
    state.vertices.push_back({start, f0});
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<double> p = start;
      p[j] += std::max(options.relative_step * std::fabs(p[j]), options.zero_step);
      const double f = eval(p);
      state.vertices.push_back({std::move(p), f});
    }
  }
  sort_vertices(state.vertices);
  state.best_history.push_back(state.vertices.front().value);

  bool converged = within_tolerance(state.vertices, options);
  std::vector<double> centroid(dim);
  auto& v = state.vertices;

  while (!converged && state.iteration < options.max_iterations) {
    ++state.iteration;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += v[i].point[j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    Vertex& worst = v.back();
    const double f_best = v.front().value;
    const double f_second_worst = v[dim - 1].value;

    auto reflected = affine(centroid, worst.point, kReflect);
    const double f_reflected = eval(reflected);

    bool shrink = false;
    if (f_reflected < f_best) {
      auto expanded = affine(centroid, worst.point, kExpand);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        worst = {std::move(expanded), f_expanded};
      } else {
        worst = {std::move(reflected), f_reflected};
      }
    } else if (f_reflected < f_second_worst) {
      worst = {std::move(reflected), f_reflected};
    } else if (f_reflected < worst.value) {
      // outside contraction, toward the reflected point
      auto contracted = affine(centroid, reflected, -kContract);
      const double f_contracted = eval(contracted);
      if (f_contracted <= f_reflected) {
        worst = {std::move(contracted), f_contracted};
      } else {
        shrink = true;
      }
    } else {
      auto contracted = affine(centroid, worst.point, -kContract);
      const double f_contracted = eval(contracted);
      if (f_contracted < worst.value) {
        worst = {std::move(contracted), f_contracted};
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      const auto best_point = v.front().point;
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          v[i].point[j] = best_point[j] + kShrink * (v[i].point[j] - best_point[j]);
        }
        v[i].value = eval(v[i].point);
      }
    }

    sort_vertices(v);
    state.best_history.push_back(v.front().value);
    converged = within_tolerance(v, options);
  }

  NelderMeadResult result;
  result.x_min = v.front().point;
  result.f_min = v.front().value;
  result.converged = converged;
  result.iterations = state.iteration;
  result.evaluations = eval.count() + 1;
  result.best_history = state.best_history;
  result.final_simplex = std::move(state);
  return result;
}

}  // namespace censpl::optim
