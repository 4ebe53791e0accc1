#include "ccim/postproc.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "ccim/error.hpp"

namespace ccim {

InterfaceGradient interface_gradient(const CrossingRecord& c, const std::vector<double>& u) {
  Vec3 own{}, jump{};
  for (int j = 0; j < 3; ++j) {
    own[j] = c.grad_own[j].evaluate(u);
    jump[j] = c.grad_jump[j].evaluate(u);
  }
  if (c.recorded_from == Side::Minus) return {own, own + jump};
  return {own - jump, own};
}

double gradient_jump_normal(const CrossingRecord& c, const InterfaceGradient& g) {
  return dot(g.plus - g.minus, c.hit.geometry.normal);
}

ErrorReport compute_errors(const Grid& grid, const SignField& signs, const ManufacturedProblem& problem,
                           const AssembledSystem& system, const std::vector<double>& u) {
  ErrorReport r;
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
    const Index3 i = grid.multi(idx);
    const double e = std::fabs(u[idx] - problem.exact(signs.side(idx), grid.point(i)));
    if (e > r.err_u_inf) {
      r.err_u_inf = e;
      r.worst_point = i;
    }
  }
  r.gradients.reserve(system.crossings.size());
  for (const auto& c : system.crossings) {
    GradientSample g;
    g.location = c.hit.location;
    g.axis = c.hit.axis;
    g.computed = interface_gradient(c, u);
    g.exact = {problem.exact_gradient(Side::Minus, g.location), problem.exact_gradient(Side::Plus, g.location)};
    g.error = std::max(norm(g.computed.minus - g.exact.minus), norm(g.computed.plus - g.exact.plus));
    r.err_grad_inf = std::max(r.err_grad_inf, g.error);
    r.gradients.push_back(g);
  }
  return r;
}

double fit_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ConfigError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, e] : points) {
    if (!(n > 0.0) || !(e > 0.0)) throw ConfigError("slope fit needs positive N and error values");
    const double x = std::log(n), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  const double den = m * sxx - sx * sx;
  if (den == 0.0) throw ConfigError("slope fit needs distinct N values");
  return (m * sxy - sx * sy) / den;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "N,h,err_u_inf,err_grad_inf,iterations,assemble_seconds,solve_seconds\n";
  out << std::setprecision(10);
  for (const auto& r : rows)
    out << r.n << "," << r.h << "," << r.err_u_inf << "," << r.err_grad_inf << "," << r.iterations << ","
        << r.assemble_seconds << "," << r.solve_seconds << "\n";
}

}  // namespace ccim
