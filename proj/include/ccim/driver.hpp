#pragma once

// End-to-end runs used by the CLI and the acceptance suite: assemble, solve,
// measure.

#include <map>
#include <string>
#include <vector>

#include "ccim/postproc.hpp"

namespace ccim {

struct RunOptions {
  int threads = 1;
  SolverOptions solver{};
  CouplingOptions coupling{};
};

struct RunResult {
  int n = 0;
  double h = 0.0;
  ErrorReport errors;
  SolveReport solve;
  double assemble_seconds = 0.0;
  std::size_t interface_points = 0;
  std::size_t crossings = 0;
  int max_radius = 0;
  double max_condition = 0.0;
  /// Points where the Corner / FirstDerivAssisted comparison ran.
  std::size_t tie_points = 0;
  std::map<std::string, std::size_t> scheme_histogram;
  std::vector<double> u;

  ConvergenceRow row() const;
};

RunResult run_manufactured(const Surface& surface, const ManufacturedProblem& problem, int n,
                           const RunOptions& options = {});

}  // namespace ccim
