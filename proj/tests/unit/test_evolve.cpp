#include <gtest/gtest.h>

#include <cmath>

#include "ccim/error.hpp"
#include "ccim/evolve.hpp"
#include "support.hpp"

using namespace ccim;
using ccim::testing::uniform;

namespace {

std::vector<double> sample(const Grid& grid, const std::function<double(const Vec3&)>& f) {
  std::vector<double> v(grid.size());
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) v[idx] = f(grid.point(grid.multi(idx)));
  return v;
}

std::vector<InterfaceSpeed> crossings_with_speed(const Grid& grid, const Surface& s, double speed) {
  const SignField signs(grid, s);
  std::vector<InterfaceSpeed> out;
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
    const Index3 i = grid.multi(idx);
    for (int k = 0; k < 3; ++k)
      if (i[k] < grid.n())
        if (auto hit = find_intersection(signs, s, i, k, 1)) out.push_back({*hit, speed});
  }
  return out;
}

double mean_radius(const Grid& grid, const std::vector<double>& phi) {
  double s = 0.0;
  const auto pts = measure_crossings(grid, phi);
  for (const auto& p : pts) s += norm(p);
  return s / pts.size();
}

// Antiderivative of (1 + r^2)^2 / (4 r): G(r(t)) - G(r0) = t along dr/dt = 4r/(1+r^2)^2.
double G(double r) { return 0.25 * (std::log(r) + r * r + r * r * r * r / 4.0); }

}  // namespace

TEST(GridLevelSet, TricubicReproducesCubics) {
  const Grid grid(8);
  auto p = [](const Vec3& x) {
    return x[0] * x[0] * x[0] - 2 * x[0] * x[1] * x[1] + x[1] * x[2] + x[2] * x[2] * x[2] + x[0] * x[1] * x[2] + 0.3;
  };
  const GridLevelSet ls(grid, sample(grid, p));
  for (int t = 0; t < 200; ++t) {
    const Vec3 x{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
    const double a = x[0], b = x[1], c = x[2];
    EXPECT_NEAR(ls.phi(x), p(x), 1e-12);
    const Vec3 g = ls.gradient(x);
    EXPECT_NEAR(g[0], 3 * a * a - 2 * b * b + b * c, 1e-11);
    EXPECT_NEAR(g[1], -4 * a * b + c + a * c, 1e-11);
    EXPECT_NEAR(g[2], b + 3 * c * c + a * b, 1e-11);
    const Mat3 hs = ls.hessian(x);
    EXPECT_NEAR(hs[0][0], 6 * a, 1e-9);
    EXPECT_NEAR(hs[0][1], -4 * b + c, 1e-9);
    EXPECT_NEAR(hs[1][1], -4 * a, 1e-9);
    EXPECT_NEAR(hs[1][2], 1 + a, 1e-9);
    EXPECT_NEAR(hs[2][2], 6 * c, 1e-9);
  }
  EXPECT_THROW(GridLevelSet(Grid(2), std::vector<double>(27, 0.0)), Error);
}

TEST(Velocity, UniformSpeedExtendsToConstant) {
  const Grid grid(20);
  const auto sphere = make_sphere(0.5);
  const auto phi = sample(grid, [](const Vec3& x) { return norm(x) - 0.5; });
  const auto v = extend_velocity(grid, phi, crossings_with_speed(grid, *sphere, 1.7));
  for (double s : v) EXPECT_NEAR(s, 1.7, 1e-12);
  EXPECT_THROW(extend_velocity(grid, phi, {}), Error);
}

// Speed equal to the x-coordinate of the crossing: extension is constant along
// radial normals, so far nodes carry x * r0 / |x| up to O(h).
TEST(Velocity, ConstantAlongNormals) {
  const Grid grid(40);
  const auto sphere = make_sphere(0.5);
  auto speeds = crossings_with_speed(grid, *sphere, 0.0);
  for (auto& s : speeds) s.speed = s.hit.location[0];
  const auto phi = sample(grid, [](const Vec3& x) { return norm(x) - 0.5; });
  const auto v = extend_velocity(grid, phi, speeds);
  double worst = 0.0;
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
    const Vec3 x = grid.point(grid.multi(idx));
    const double r = norm(x);
    if (std::fabs(r - 0.5) > 5 * grid.h() || r < 0.2) continue;
    worst = std::max(worst, std::fabs(v[idx] - 0.5 * x[0] / r));
  }
  EXPECT_LE(worst, 4 * grid.h());
}

TEST(Godunov, ZeroSpeedUnchanged) {
  const Grid grid(16);
  const auto phi = sample(grid, [](const Vec3& x) { return 2 * x[0] * x[0] + x[1] * x[1] - 0.3 + x[2]; });
  EXPECT_EQ(godunov_step(grid, phi, std::vector<double>(grid.size(), 0.0), 0.01), phi);
}

TEST(Godunov, UnitSpeedGrowsRadius) {
  const Grid grid(40);
  const auto phi = sample(grid, [](const Vec3& x) { return norm(x) - 0.5; });
  const std::vector<double> v(grid.size(), 1.0);
  const double dt = 0.4 * grid.h();
  const auto next = godunov_step(grid, phi, v, dt);
  EXPECT_NEAR(mean_radius(grid, next) - mean_radius(grid, phi), dt, 0.05 * dt);
  EXPECT_THROW(godunov_step(grid, phi, v, 0.6 * grid.h()), ConfigError);
}

TEST(Evolve, MeasureCrossingsOnSphere) {
  const Grid grid(40);
  const auto pts = measure_crossings(grid, sample(grid, [](const Vec3& x) { return norm(x) - 0.5; }));
  ASSERT_GT(pts.size(), 100u);
  for (const auto& p : pts) EXPECT_NEAR(norm(p), 0.5, grid.h() * grid.h());
}

TEST(Evolve, ReferenceRadius) {
  EXPECT_DOUBLE_EQ(reference_radius(0.5, 0.0), 0.5);
  EXPECT_NEAR(reference_radius(0.5, 0.3, [](double) { return 0.0; }), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(radial_example_speed(0.5), 1.28);
  const double r = reference_radius(0.5, 0.1);
  EXPECT_NEAR(G(r) - G(0.5), 0.1, 1e-12);
  EXPECT_NEAR(reference_radius(0.5, 0.1, {}, 5e-7), r, 1e-12);
}

// Short run: interface speeds from the solve match 4r/(1+r^2)^2 and the radius
// tracks the reference.
TEST(Evolve, ShortExpandingSphere) {
  EvolveOptions o;
  o.t_end = 0.02;
  const auto rep = run_expanding_sphere(20, o);
  ASSERT_FALSE(rep.history.empty());
  EXPECT_NEAR(rep.history.front().min_speed, 1.28, 0.07);
  EXPECT_NEAR(rep.history.front().max_speed, 1.28, 0.07);
  EXPECT_NEAR(rep.history.back().t, 0.02, 1e-14);
  EXPECT_LE(rep.max_error, 5e-3);
  EXPECT_LE(rep.rmse, rep.max_error);
}
