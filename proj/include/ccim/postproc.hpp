#pragma once

// Error norms, interface-gradient recovery and slope fitting.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ccim/assembly.hpp"
#include "ccim/problem.hpp"

namespace ccim {

struct InterfaceGradient {
  Vec3 minus{};
  Vec3 plus{};
};

/// Own-side gradient at the crossing from the solved u, the other side by adding
/// (or subtracting) the recovered [grad u].
InterfaceGradient interface_gradient(const CrossingRecord& crossing, const std::vector<double>& u);

/// (grad u+ - grad u-) . n
double gradient_jump_normal(const CrossingRecord& crossing, const InterfaceGradient& g);

struct GradientSample {
  Vec3 location{};
  int axis = 0;
  InterfaceGradient computed;
  InterfaceGradient exact;
  double error = 0.0;
};

struct ErrorReport {
  double err_u_inf = 0.0;
  double err_grad_inf = 0.0;
  Index3 worst_point{};
  std::vector<GradientSample> gradients;
};

/// Max nodal error, and max over both sides and all crossings of the gradient error
/// (Euclidean norm of the difference vector).
ErrorReport compute_errors(const Grid& grid, const SignField& signs, const ManufacturedProblem& problem,
                           const AssembledSystem& system, const std::vector<double>& u);

/// Least-squares slope of log(error) against log(N). Throws ConfigError for fewer
/// than two points or nonpositive values.
double fit_slope(const std::vector<std::pair<double, double>>& points);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double err_u_inf = 0.0;
  double err_grad_inf = 0.0;
  int iterations = 0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

}  // namespace ccim
