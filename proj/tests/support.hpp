#pragma once

// Oracles shared by unit and acceptance tests: exact symbol assignments from
// manufactured solutions, random helpers with fixed seeds.

#include <random>
#include <vector>

#include "ccim/affine.hpp"
#include "ccim/problem.hpp"

namespace ccim::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vec3 random_unit() {
  std::normal_distribution<double> g;
  Vec3 v{g(rng()), g(rng()), g(rng())};
  return (1.0 / norm(v)) * v;
}

/// Exact u at every node, taken on the node's side.
inline std::vector<double> exact_nodal(const Grid& grid, const SignField& signs, const ManufacturedProblem& p) {
  std::vector<double> u(grid.size());
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) u[idx] = p.exact(signs.side(idx), grid.point(grid.multi(idx)));
  return u;
}

/// Symbol values at point i: nodal u on each node's side; derivatives on i's side;
/// mixed jumps from the exact Hessians at `jump_at`.
inline std::vector<double> exact_assignment(const Grid& grid, const SignField& signs, const ManufacturedProblem& p,
                                            const Index3& i, const Vec3& jump_at) {
  std::vector<double> a(symbol::kCount, 0.0);
  for (Symbol s = 0; s < kGridSymbols; ++s) {
    const Index3 j = i + symbol::offset_of(s);
    if (grid.in_bounds(j)) a[s] = p.exact(signs.side(j), grid.point(j));
  }
  const Side own = signs.side(i);
  const Vec3 x = grid.point(i);
  const Vec3 g = p.exact_gradient(own, x);
  const Mat3 hs = p.exact_hessian(own, x);
  for (int k = 0; k < 3; ++k) {
    a[symbol::first_derivative(k)] = g[k];
    a[symbol::pure_second(k)] = hs[k][k];
  }
  const Mat3 hp = p.exact_hessian(Side::Plus, jump_at), hm = p.exact_hessian(Side::Minus, jump_at);
  for (const auto& [k, l] : symbol::kPairs) a[symbol::mixed_jump(k, l)] = hp[k][l] - hm[k][l];
  return a;
}

}  // namespace ccim::testing
