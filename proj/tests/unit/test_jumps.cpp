#include <gtest/gtest.h>

#include <cmath>

#include "ccim/error.hpp"
#include "ccim/jumps.hpp"
#include "support.hpp"

using namespace ccim;
using namespace ccim::testing;

namespace {

SurfaceGeometry random_frame_geometry() {
  SurfaceGeometry g;
  g.normal = random_unit();
  auto t = tangent_frame(g.normal);
  const double th = uniform(0, 2 * M_PI);
  const double sgn = uniform(0, 1) < 0.5 ? -1.0 : 1.0;
  g.tangents[0] = std::cos(th) * t[0] + std::sin(th) * t[1];
  g.tangents[1] = sgn * (-std::sin(th) * t[0] + std::cos(th) * t[1]);
  return g;
}

MixedForms constant_mixed(const Mat3& hs) {
  MixedForms m;
  for (const auto& [j, l] : symbol::kPairs) m[symbol::pair_index(j, l)] = AffineForm::constant(hs[j][l]);
  return m;
}

}  // namespace

TEST(Jumps, DeterminantOfGIsOne) {
  for (int t = 0; t < 1000; ++t) {
    const auto lu = SmallLu::factor(assemble_G(random_frame_geometry()));
    ASSERT_TRUE(lu);
    EXPECT_NEAR(std::fabs(lu->determinant()), 1.0, 1e-10);
  }
}

// Plane x = const, eps- = 2, eps+ = 80, sigma = 0, base point inside:
// [u_x] = -(78/80) u_x^-.
TEST(Jumps, PlanarFirstDerivativeJump) {
  SurfaceGeometry geo;
  geo.normal = unit(0);
  geo.tangents = tangent_frame(geo.normal);
  InterfaceSample d;
  d.own = Side::Minus;
  d.eps = {2.0, 80.0};
  std::array<AffineForm, 3> grad;
  for (int j = 0; j < 3; ++j) grad[j] = AffineForm::of(symbol::first_derivative(j));
  const AffineForm j0 = first_derivative_jump(0, geo, d, grad);
  EXPECT_DOUBLE_EQ(j0[symbol::first_derivative(0)], -78.0 / 80.0);
  EXPECT_DOUBLE_EQ(j0.constant_term(), 0.0);
  const AffineForm j1 = first_derivative_jump(1, geo, d, grad);
  EXPECT_DOUBLE_EQ(j1.max_abs(), 0.0);

  d.own = Side::Plus;
  const AffineForm p0 = first_derivative_jump(0, geo, d, grad);
  EXPECT_DOUBLE_EQ(p0[symbol::first_derivative(0)], -78.0 / 2.0);
}

// No jumps at all: every recovered jump vanishes identically.
TEST(Jumps, ZeroDataGivesZeroJumps) {
  const auto geo = random_frame_geometry();
  InterfaceSample d;
  d.eps = {1.0, 1.0};
  Intersection hit;
  hit.geometry = geo;
  hit.alpha = 0.3;
  MixedForms mixed;
  for (int p = 0; p < 3; ++p) mixed[p] = AffineForm::of(symbol::grid_value({1, 1, 0}));
  const auto own = expand_own_side(hit, 0.1, mixed);
  const auto sol = solve_jumps(assemble_G(geo), assemble_jump_rhs(geo, d, own, mixed));
  for (const auto& f : sol.forms) EXPECT_LE(f.max_abs(), 1e-14);
}

// With exact one-sided data at the crossing, the G-system returns the exact
// Hessian jump for every preset, on both sides, at every ellipsoid crossing.
TEST(Jumps, ExactDataReproducesHessianJump) {
  const Grid grid(16);
  const auto surface = make_ellipsoid();
  const SignField signs(grid, *surface);
  for (const auto& name : preset_names()) {
    const auto p = preset_problem(name);
    int checked = 0;
    for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
      const Index3 i = grid.multi(idx);
      if (grid.on_boundary(i)) continue;
      for (int k = 0; k < 3; ++k) {
        const auto hit = find_intersection(signs, *surface, i, k, 1);
        if (!hit) continue;
        const Vec3& x = hit->location;
        for (Side own : {Side::Minus, Side::Plus}) {
          const auto data = sample_interface(*p, *hit, own);
          const Mat3 ho = p->exact_hessian(own, x);
          const Vec3 go = p->exact_gradient(own, x);
          const MixedForms mixed = constant_mixed(ho);
          OwnSideExpansion e;
          e.value = AffineForm::constant(p->exact(own, x));
          for (int j = 0; j < 3; ++j) e.gradient[j] = AffineForm::constant(go[j]);
          std::vector<double> a(symbol::kCount, 0.0);
          for (int j = 0; j < 3; ++j) a[symbol::pure_second(j)] = ho[j][j];
          const auto sol = solve_jumps(assemble_G(hit->geometry), assemble_jump_rhs(hit->geometry, data, e, mixed));
          const Mat3 hp = p->exact_hessian(Side::Plus, x), hm = p->exact_hessian(Side::Minus, x);
          double scale = 1.0;
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) scale = std::max(scale, std::fabs(hp[r][c]) + std::fabs(hm[r][c]));
          for (int r = 0; r < 3; ++r)
            for (int c = r; c < 3; ++c) EXPECT_NEAR(sol(r, c).evaluate(a), hp[r][c] - hm[r][c], 1e-9 * scale) << name;
          const Vec3 gp = p->exact_gradient(Side::Plus, x), gm = p->exact_gradient(Side::Minus, x);
          for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(first_derivative_jump(j, hit->geometry, data, e.gradient).evaluate(a), gp[j] - gm[j],
                        1e-10 * (1.0 + norm(gp) + norm(gm)));
        }
        ++checked;
      }
    }
    EXPECT_GT(checked, 20) << name;
  }
}

// A mixed form that reads the unknown jump itself (cross-interface scheme):
// moving it into the matrix still yields the exact jumps.
TEST(Jumps, MixedJumpSymbolsMoveIntoMatrix) {
  const auto p = preset_problem("example1");
  const auto sphere = make_sphere(0.45);
  const Grid grid(20);
  const SignField signs(grid, *sphere);
  const auto hit = find_intersection(signs, *sphere, {14, 10, 10}, 0, 1);
  ASSERT_TRUE(hit);
  const Vec3& x = hit->location;
  const Side own = signs.side(Index3{14, 10, 10});
  const Mat3 ho = p->exact_hessian(own, x);
  const Mat3 hp = p->exact_hessian(Side::Plus, x), hm = p->exact_hessian(Side::Minus, x);
  MixedForms mixed = constant_mixed(ho);
  // u_kl^own = u_kl^far - sign [u_kl]: written with the jump symbol and the far-side value.
  const double c = -toward_other(own);
  for (const auto& [j, l] : symbol::kPairs) {
    const double far = own == Side::Minus ? hp[j][l] : hm[j][l];
    mixed[symbol::pair_index(j, l)] = AffineForm::constant(far) + AffineForm::of(symbol::mixed_jump(j, l), c);
  }
  const auto data = sample_interface(*p, *hit, own);
  OwnSideExpansion e;
  e.value = AffineForm::constant(p->exact(own, x));
  const Vec3 go = p->exact_gradient(own, x);
  for (int j = 0; j < 3; ++j) e.gradient[j] = AffineForm::constant(go[j]);
  std::vector<double> a(symbol::kCount, 0.0);
  for (int j = 0; j < 3; ++j) a[symbol::pure_second(j)] = ho[j][j];
  const auto sol = solve_jumps(assemble_G(hit->geometry), assemble_jump_rhs(hit->geometry, data, e, mixed));
  for (const auto& f : sol.forms) EXPECT_FALSE(f.has_any(symbol::is_mixed_jump));
  for (int r = 0; r < 3; ++r)
    for (int q = r; q < 3; ++q) EXPECT_NEAR(sol(r, q).evaluate(a), hp[r][q] - hm[r][q], 1e-9 * 80);
}

TEST(Jumps, OwnSideExpansion) {
  Intersection hit;
  hit.axis = 1;
  hit.direction = -1;
  hit.alpha = 0.25;
  MixedForms mixed;
  for (int p = 0; p < 3; ++p) mixed[p] = AffineForm::constant(p + 1.0);
  const auto e = expand_own_side(hit, 0.2, mixed);
  EXPECT_DOUBLE_EQ(e.value[symbol::first_derivative(1)], -0.05);
  EXPECT_DOUBLE_EQ(e.value[symbol::pure_second(1)], 0.5 * 0.05 * 0.05);
  EXPECT_DOUBLE_EQ(e.gradient[1][symbol::pure_second(1)], -0.05);
  EXPECT_DOUBLE_EQ(e.gradient[0].constant_term(), -0.05 * 1.0);  // u_01
  EXPECT_DOUBLE_EQ(e.gradient[2].constant_term(), -0.05 * 3.0);  // u_12
}

TEST(Jumps, SingularSystemReported) {
  SmallMatrix z(6);
  std::array<AffineForm, 6> rhs;
  EXPECT_THROW(solve_jumps(z, rhs, "test"), SingularSystem);
}
