#include "ccim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccim/error.hpp"

namespace ccim {

Grid::Grid(int n) : n_(n), h_(2.0 / n) {
  if (n < 2) throw ConfigError("grid needs N >= 2, got " + std::to_string(n));
}

SignField::SignField(const Grid& grid, const Surface& surface) : grid_(grid), phi_(grid.size()) {
  const int m = grid.points_per_axis();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const Index3 i{a, b, c};
        phi_[grid.linear(i)] = surface.phi(grid.point(i));
      }
  perturb();
}

SignField::SignField(const Grid& grid, std::vector<double> nodal_phi) : grid_(grid), phi_(std::move(nodal_phi)) {
  if (static_cast<std::int64_t>(phi_.size()) != grid.size()) throw Error("nodal level set size does not match grid");
  perturb();
}

void SignField::perturb() {
  const double eps = 1e-10 * grid_.h();
  for (double& v : phi_) {
    if (std::fabs(v) < eps) v = v > 0.0 ? eps : -eps;
  }
}

PointKind classify_point(const SignField& signs, const Index3& i) {
  const Grid& g = signs.grid();
  for (int k = 0; k < 3; ++k)
    if (i[k] <= 0 || i[k] >= g.n()) throw Error("classify_point: boundary index");
  const Side own = signs.side(i);
  for (int k = 0; k < 3; ++k)
    for (int s : {-1, 1})
      if (signs.side(i + axis_offset(k, s)) != own) return PointKind::Interface;
  return PointKind::Interior;
}

std::optional<Intersection> find_intersection(const SignField& signs, const Surface& surface, const Index3& i,
                                              int axis, int direction) {
  const Grid& g = signs.grid();
  const Index3 j = i + axis_offset(axis, direction);
  if (!g.in_bounds(i) || !g.in_bounds(j)) return std::nullopt;
  const double phi_i = signs.phi(i);
  const double phi_j = signs.phi(j);
  if ((phi_i < 0.0) == (phi_j < 0.0)) return std::nullopt;

  const Vec3 xi = g.point(i);
  const double step = direction * g.h();
  auto eval = [&](double t) {
    Vec3 x = xi;
    x[axis] += t * step;
    return surface.phi(x);
  };
  // Bracket on [0,1] in units of h, using the perturbed nodal signs at the ends.
  double lo = 0.0, hi = 1.0;
  const bool lo_negative = phi_i < 0.0;
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = eval(mid);
    if ((v < 0.0) == lo_negative)
      lo = mid;
    else
      hi = mid;
  }
  Intersection hit;
  hit.base = i;
  hit.axis = axis;
  hit.direction = direction;
  hit.alpha = std::clamp(0.5 * (lo + hi), kAlphaClamp, 1.0 - kAlphaClamp);
  hit.beta = 1.0 - hit.alpha;
  hit.location = xi;
  hit.location[axis] += hit.alpha * step;
  hit.geometry = geometry_at(surface, hit.location);
  return hit;
}

bool has_multiple_crossings(const SignField& signs, const Surface& surface, const Index3& i, int axis,
                            int direction) {
  const Grid& g = signs.grid();
  const Vec3 xi = g.point(i);
  int changes = 0;
  bool prev_negative = signs.phi(i) < 0.0;
  for (int s = 1; s <= 9; ++s) {
    double v;
    if (s == 9) {
      v = signs.phi(i + axis_offset(axis, direction));
    } else {
      Vec3 x = xi;
      x[axis] += direction * g.h() * s / 9.0;
      v = surface.phi(x);
    }
    const bool negative = v < 0.0;
    if (negative != prev_negative) ++changes;
    prev_negative = negative;
  }
  return changes > 1;
}

}  // namespace ccim
