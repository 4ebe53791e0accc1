#include "ccim/driver.hpp"

#include <algorithm>

namespace ccim {

ConvergenceRow RunResult::row() const {
  return {n, h, errors.err_u_inf, errors.err_grad_inf, solve.iterations, assemble_seconds, solve.seconds};
}

RunResult run_manufactured(const Surface& surface, const ManufacturedProblem& problem, int n,
                           const RunOptions& options) {
  const Grid grid(n);
  const SignField signs(grid, surface);
  AssemblyOptions ao;
  ao.threads = options.threads;
  ao.coupling = options.coupling;
  const AssembledSystem sys = assemble_system(grid, surface, signs, problem, ao);

  RunResult r;
  r.n = n;
  r.h = grid.h();
  r.assemble_seconds = sys.seconds;
  SolverOptions so = options.solver;
  so.threads = options.threads;
  r.solve = bicgstab(sys.matrix, sys.rhs, r.u, so);
  r.errors = compute_errors(grid, signs, problem, sys, r.u);
  r.interface_points = sys.interface_points.size();
  r.crossings = sys.crossings.size();
  for (const auto& p : sys.interface_points) {
    r.max_radius = std::max(r.max_radius, p.radius);
    r.max_condition = std::max(r.max_condition, p.condition);
    if (p.candidates > 1) ++r.tie_points;
    for (MixedKind k : p.schemes) ++r.scheme_histogram[std::string(kind_name(k))];
  }
  return r;
}

}  // namespace ccim
