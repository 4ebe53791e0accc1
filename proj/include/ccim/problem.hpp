#pragma once

// Coefficients, sources and jump data of the interface problem
//
//   -div(eps grad u) + a u = f   in Omega \ Gamma
//   [u] = tau,  [eps grad u . n] = sigma   on Gamma
//   u = g   on the box boundary
//
// plus the manufactured presets whose exact solutions drive the convergence studies.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ccim/grid.hpp"
#include "ccim/surface.hpp"

namespace ccim {

/// A smooth scalar field with analytic first and second derivatives.
struct Field {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;

  static Field constant(double c);
};

class Problem {
 public:
  virtual ~Problem() = default;

  virtual double eps(Side side, const Vec3& x) const = 0;
  virtual Vec3 grad_eps(Side side, const Vec3& x) const = 0;
  virtual double a(Side side, const Vec3& x) const = 0;
  virtual double f(Side side, const Vec3& x) const = 0;
  virtual double boundary(Side side, const Vec3& x) const = 0;

  /// [u] extended smoothly off the interface, with derivatives.
  virtual double tau(const Vec3& x) const = 0;
  virtual Vec3 grad_tau(const Vec3& x) const = 0;
  virtual Mat3 hess_tau(const Vec3& x) const = 0;
  /// [eps grad u . n] at an interface point with the given geometry.
  virtual double sigma(const Vec3& x, const SurfaceGeometry& geom) const = 0;
  /// Derivative of sigma along the tangent direction t.
  virtual double sigma_tangential(const Vec3& x, const SurfaceGeometry& geom, const Vec3& t) const = 0;
};

/// Problem whose data are derived from known per-side solutions.
class ManufacturedProblem final : public Problem {
 public:
  ManufacturedProblem(std::string name, Field u_minus, Field u_plus, Field eps_minus, Field eps_plus, Field a_minus,
                      Field a_plus);

  const std::string& name() const { return name_; }
  double exact(Side side, const Vec3& x) const { return u(side).value(x); }
  Vec3 exact_gradient(Side side, const Vec3& x) const { return u(side).gradient(x); }
  Mat3 exact_hessian(Side side, const Vec3& x) const { return u(side).hessian(x); }

  double eps(Side side, const Vec3& x) const override { return pick(eps_, side).value(x); }
  Vec3 grad_eps(Side side, const Vec3& x) const override { return pick(eps_, side).gradient(x); }
  double a(Side side, const Vec3& x) const override { return pick(a_, side).value(x); }
  double f(Side side, const Vec3& x) const override;
  double boundary(Side side, const Vec3& x) const override { return exact(side, x); }
  double tau(const Vec3& x) const override;
  Vec3 grad_tau(const Vec3& x) const override;
  Mat3 hess_tau(const Vec3& x) const override;
  double sigma(const Vec3& x, const SurfaceGeometry& geom) const override;
  double sigma_tangential(const Vec3& x, const SurfaceGeometry& geom, const Vec3& t) const override;

 private:
  const Field& u(Side side) const { return pick(u_, side); }
  static const Field& pick(const std::array<Field, 2>& f, Side side) { return f[side == Side::Minus ? 0 : 1]; }

  std::string name_;
  std::array<Field, 2> u_;
  std::array<Field, 2> eps_;
  std::array<Field, 2> a_;
};

using ProblemPtr = std::shared_ptr<const ManufacturedProblem>;

/// example1, example3, example4, quadratic_oracle, quadratic_variable_eps, poisson.
/// Throws ConfigError for unknown names.
ProblemPtr preset_problem(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace ccim
