#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace censpl::optim {

struct Vertex {
  std::vector<double> point;
  double value = 0.0;
};

// Vertices are kept sorted by value, best first; dimension + 1 of them.
struct SimplexState {
  std::vector<Vertex> vertices;
  int iteration = 0;
  // Best value after construction and after every iteration.
  std::vector<double> best_history;
};

struct NelderMeadOptions {
  // Converged when every vertex is within x_tolerance of the best one in the
  // max norm and every value within f_tolerance of the best value.
  double x_tolerance = 1e-8;
  double f_tolerance = 1e-10;
  int max_iterations = 2000;
  // Initial simplex: x0 plus one vertex per coordinate, offset by
  // max(relative_step * |x0_i|, zero_step).
  double relative_step = 0.05;
  double zero_step = 0.00025;
};

struct NelderMeadResult {
  std::vector<double> x_min;
  double f_min = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  std::vector<double> best_history;
  SimplexState final_simplex;
};

using Objective = std::function<double(std::span<const double>)>;

// Nelder-Mead simplex with reflection 1, expansion 2, contractions 0.5 and
// shrink 0.5. A reflected point is kept only if strictly better than the
// second-worst vertex; ties contract, so the simplex keeps shrinking once the
// objective is flat to rounding. NaN or infinite objective values at trial
// points count as +inf.
// Throws NonFiniteObjective if the objective is not finite at x0 and
// DomainError if x0 has fewer than 1 or more than 8 coordinates.
NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace censpl::optim
