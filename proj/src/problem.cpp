#include "ccim/problem.hpp"

#include <cmath>

#include "ccim/error.hpp"

namespace ccim {

Field Field::constant(double c) {
  return Field{[c](const Vec3&) { return c; }, [](const Vec3&) { return Vec3{}; }, [](const Vec3&) { return Mat3{}; }};
}

ManufacturedProblem::ManufacturedProblem(std::string name, Field u_minus, Field u_plus, Field eps_minus,
                                         Field eps_plus, Field a_minus, Field a_plus)
    : name_(std::move(name)),
      u_{std::move(u_minus), std::move(u_plus)},
      eps_{std::move(eps_minus), std::move(eps_plus)},
      a_{std::move(a_minus), std::move(a_plus)} {}

double ManufacturedProblem::f(Side side, const Vec3& x) const {
  const Field& uf = u(side);
  return -eps(side, x) * trace(uf.hessian(x)) - dot(grad_eps(side, x), uf.gradient(x)) + a(side, x) * uf.value(x);
}

double ManufacturedProblem::tau(const Vec3& x) const { return u(Side::Plus).value(x) - u(Side::Minus).value(x); }

Vec3 ManufacturedProblem::grad_tau(const Vec3& x) const {
  return u(Side::Plus).gradient(x) - u(Side::Minus).gradient(x);
}

Mat3 ManufacturedProblem::hess_tau(const Vec3& x) const {
  return u(Side::Plus).hessian(x) + (-1.0) * u(Side::Minus).hessian(x);
}

double ManufacturedProblem::sigma(const Vec3& x, const SurfaceGeometry& geom) const {
  return eps(Side::Plus, x) * dot(u(Side::Plus).gradient(x), geom.normal) -
         eps(Side::Minus, x) * dot(u(Side::Minus).gradient(x), geom.normal);
}

double ManufacturedProblem::sigma_tangential(const Vec3& x, const SurfaceGeometry& geom, const Vec3& t) const {
  // d/dt (eps grad u . n) = (grad eps . t)(grad u . n) + eps (t^T Hess u n + grad u . (grad n) t)
  const Vec3 dn = mul(geom.normal_jacobian, t);
  double total = 0.0;
  for (Side side : {Side::Plus, Side::Minus}) {
    const Vec3 g = u(side).gradient(x);
    const double term = dot(grad_eps(side, x), t) * dot(g, geom.normal) +
                        eps(side, x) * (bilinear(t, u(side).hessian(x), geom.normal) + dot(g, dn));
    total += side == Side::Plus ? term : -term;
  }
  return total;
}

namespace {

// x y + x^4 + y^4 + x z^2 + cos(2x + y^2 + z^3)
Field example_outer() {
  return Field{
      [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        return x * y + x * x * x * x + y * y * y * y + x * z * z + std::cos(2 * x + y * y + z * z * z);
      },
      [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        const double s = std::sin(2 * x + y * y + z * z * z);
        return Vec3{y + 4 * x * x * x + z * z - 2 * s, x + 4 * y * y * y - 2 * y * s, 2 * x * z - 3 * z * z * s};
      },
      [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        const double w = 2 * x + y * y + z * z * z;
        const double s = std::sin(w), c = std::cos(w);
        const Vec3 gw{2.0, 2 * y, 3 * z * z};
        Mat3 h{{{12 * x * x, 1.0, 2 * z}, {1.0, 12 * y * y, 0.0}, {2 * z, 0.0, 2 * x}}};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) h[i][j] -= c * gw[i] * gw[j];
        h[1][1] -= 2 * s;
        h[2][2] -= 6 * z * s;
        return h;
      }};
}

// x^3 + x y^2 + y^3 + z^4 + sin(3(x^2 + y^2))
Field example_inner() {
  return Field{
      [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        return x * x * x + x * y * y + y * y * y + z * z * z * z + std::sin(3 * (x * x + y * y));
      },
      [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        const double c = std::cos(3 * (x * x + y * y));
        return Vec3{3 * x * x + y * y + 6 * x * c, 2 * x * y + 3 * y * y + 6 * y * c, 4 * z * z * z};
      },
      [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        const double v = 3 * (x * x + y * y);
        const double s = std::sin(v), c = std::cos(v);
        const Vec3 gv{6 * x, 6 * y, 0.0};
        Mat3 h{{{6 * x, 2 * y, 0.0}, {2 * y, 2 * x + 6 * y, 0.0}, {0.0, 0.0, 12 * z * z}}};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) h[i][j] -= s * gv[i] * gv[j];
        h[0][0] += 6 * c;
        h[1][1] += 6 * c;
        return h;
      }};
}

// c / (1 + |x|^2)
Field radial(double c) {
  return Field{[c](const Vec3& x) { return c / (1.0 + dot(x, x)); },
               [c](const Vec3& x) {
                 const double q = 1.0 + dot(x, x);
                 return (-2.0 * c / (q * q)) * x;
               },
               [c](const Vec3& x) {
                 const double q = 1.0 + dot(x, x);
                 return (-2.0 * c / (q * q)) * identity_mat3() + (8.0 * c / (q * q * q)) * outer(x, x);
               }};
}

/// c0 + b.x + x^T Q x / 2 with symmetric Q.
Field quadratic(double c0, const Vec3& b, const Mat3& q) {
  return Field{[=](const Vec3& x) { return c0 + dot(b, x) + 0.5 * bilinear(x, q, x); },
               [=](const Vec3& x) { return b + mul(q, x); }, [=](const Vec3&) { return q; }};
}

Field affine_field(double c0, const Vec3& b) { return quadratic(c0, b, Mat3{}); }

Field scalar_only(std::function<double(const Vec3&)> f) {
  return Field{std::move(f), [](const Vec3&) { return Vec3{}; }, [](const Vec3&) { return Mat3{}; }};
}

Field quadratic_minus() {
  return quadratic(1.0, {0.5, -0.3, 0.2}, Mat3{{{2.0, 0.4, -0.6}, {0.4, -1.0, 0.3}, {-0.6, 0.3, 1.4}}});
}
Field quadratic_plus() {
  return quadratic(-0.5, {-0.7, 0.9, 0.4}, Mat3{{{-1.2, 0.8, 0.5}, {0.8, 1.6, -0.9}, {0.5, -0.9, 0.6}}});
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example1", "example3", "example4", "quadratic_oracle", "quadratic_variable_eps", "poisson"};
}

ProblemPtr preset_problem(std::string_view name) {
  const Field zero = Field::constant(0.0);
  if (name == "example1")
    return std::make_shared<ManufacturedProblem>("example1", example_inner(), example_outer(), Field::constant(2.0),
                                                 Field::constant(80.0), zero, zero);
  if (name == "example3")
    return std::make_shared<ManufacturedProblem>(
        "example3", example_inner(), example_outer(), Field::constant(2.0), Field::constant(80.0),
        scalar_only([](const Vec3& x) { return 2.0 * std::sin(x[0]); }),
        scalar_only([](const Vec3& x) { return 80.0 * std::cos(x[2]); }));
  if (name == "example4")
    return std::make_shared<ManufacturedProblem>(
        "example4", radial(1.0), radial(-1.0), Field::constant(2.0), Field::constant(80.0),
        scalar_only([](const Vec3& x) { return 2.0 * std::sin(norm(x)); }),
        scalar_only([](const Vec3& x) { return 80.0 * std::cos(norm(x)); }));
  if (name == "quadratic_oracle")
    return std::make_shared<ManufacturedProblem>("quadratic_oracle", quadratic_minus(), quadratic_plus(),
                                                 Field::constant(2.0), Field::constant(80.0), zero, zero);
  if (name == "quadratic_variable_eps")
    return std::make_shared<ManufacturedProblem>("quadratic_variable_eps", quadratic_minus(), quadratic_plus(),
                                                 affine_field(2.0, {0.3, -0.2, 0.1}),
                                                 affine_field(80.0, {4.0, 2.0, -3.0}), zero, zero);
  if (name == "poisson") {
    Field smooth{[](const Vec3& x) { return std::exp(x[0]) * std::sin(2 * x[1]) * std::cos(x[2]); },
                 [](const Vec3& x) {
                   const double e = std::exp(x[0]), s = std::sin(2 * x[1]), c = std::cos(2 * x[1]);
                   const double cz = std::cos(x[2]), sz = std::sin(x[2]);
                   return Vec3{e * s * cz, 2 * e * c * cz, -e * s * sz};
                 },
                 [](const Vec3& x) {
                   const double e = std::exp(x[0]), s = std::sin(2 * x[1]), c = std::cos(2 * x[1]);
                   const double cz = std::cos(x[2]), sz = std::sin(x[2]);
                   Mat3 h{};
                   h[0][0] = e * s * cz;
                   h[1][1] = -4 * e * s * cz;
                   h[2][2] = -e * s * cz;
                   h[0][1] = h[1][0] = 2 * e * c * cz;
                   h[0][2] = h[2][0] = -e * s * sz;
                   h[1][2] = h[2][1] = -2 * e * c * sz;
                   return h;
                 }};
    return std::make_shared<ManufacturedProblem>("poisson", smooth, smooth, Field::constant(1.0),
                                                 Field::constant(1.0), zero, zero);
  }
  throw ConfigError("unknown problem preset '" + std::string(name) + "'");
}

}  // namespace ccim
