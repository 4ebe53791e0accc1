#pragma once

// Truncation-order battery for the mixed-derivative schemes: a catalog of schemes
// collected from sign patterns covering every kind, evaluated on an analytic
// function with all third derivatives nonzero.

#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "ccim/mixed.hpp"

namespace ccim::testing {

/// Grid with every node on Omega^- except `plus_offsets` around `center`.
inline SignField pattern_field(const Grid& grid, const Index3& center, const std::vector<Index3>& plus_offsets) {
  std::vector<double> phi(grid.size(), -1.0);
  for (const auto& o : plus_offsets) phi[grid.linear(center + o)] = 1.0;
  return SignField(grid, std::move(phi));
}

/// All 124 nonzero offsets with |o|_inf <= 2: the point is an isolated Omega^- node.
inline std::vector<Index3> isolated_point_offsets() {
  std::vector<Index3> out;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        if (a || b || c) out.push_back({a, b, c});
  return out;
}

/// Representative schemes of every kind and orientation for the pair (0, 1).
inline std::vector<MixedScheme> scheme_catalog() {
  const Grid grid(12);
  const Index3 c{6, 6, 6};
  std::vector<std::vector<Index3>> patterns{
      {},                                                  // no interface nearby: all own-side kinds
      isolated_point_offsets(),                            // only cross-interface schemes
      {{1, 0, 0}, {-1, 0, 0}, {-1, 1, 0}, {0, 1, 0}, {1, 1, 0}},  // first-derivative assisted
      {{1, 1, 0}, {-1, -1, 0}, {0, 0, 1}},
      {{1, 0, 0}, {0, 0, 1}, {1, 1, 1}, {-1, -1, -1}},
  };
  // Plus a far-side Biased/Corner stencil: isolated point whose neighbours lack diagonals.
  auto ring = isolated_point_offsets();
  std::erase_if(ring, [](const Index3& o) { return o == Index3{2, 1, 0} || o == Index3{2, -1, 0}; });
  patterns.push_back(ring);
  auto ring2 = isolated_point_offsets();
  std::erase_if(ring2, [](const Index3& o) { return o == Index3{2, 1, 0}; });
  patterns.push_back(ring2);

  std::vector<MixedScheme> out;
  std::set<std::tuple<int, int, int, int, int, int, int, int>> seen;
  for (const auto& p : patterns) {
    const SignField signs = pattern_field(grid, c, p);
    for (const auto& s : enumerate_schemes(signs, c, 0, 1)) {
      const auto key = std::make_tuple(static_cast<int>(s.kind), static_cast<int>(s.stencil), s.axis, s.sigma[0],
                                       s.sigma[1], s.base[0], s.base[1], s.base[2]);
      if (seen.insert(key).second) out.push_back(s);
    }
  }
  return out;
}

/// Nominal leading-error order in h.
inline int nominal_order(const MixedScheme& s) {
  return s.kind == MixedKind::Central ? 2 : 1;
}

/// u = exp(r . x): every derivative is a product of rates times u. The rates keep
/// every scheme's leading coefficient well away from cancellation (a shifted
/// stencil's error is a sum of two third-derivative terms that can nearly cancel
/// for unlucky rates, which masks the order at h = 0.1).
struct ExpField {
  Vec3 rate{0.4, 0.3, 0.9};
  double value(const Vec3& x) const { return std::exp(dot(rate, x)); }
};

/// |scheme(h) - u_kl| at p with exact derivative symbols and zero mixed jump.
inline double scheme_error(const MixedScheme& s, double h, const Vec3& p, const ExpField& u = {}) {
  const AffineForm f = scheme_form(s, h);
  std::vector<double> a(symbol::kCount, 0.0);
  for (Symbol sym = 0; sym < kGridSymbols; ++sym) {
    const Index3 o = symbol::offset_of(sym);
    a[sym] = u.value({p[0] + h * o[0], p[1] + h * o[1], p[2] + h * o[2]});
  }
  const double u0 = u.value(p);
  for (int k = 0; k < 3; ++k) {
    a[symbol::first_derivative(k)] = u.rate[k] * u0;
    a[symbol::pure_second(k)] = u.rate[k] * u.rate[k] * u0;
  }
  return std::fabs(f.evaluate(a) - u.rate[s.k] * u.rate[s.l] * u0);
}

}  // namespace ccim::testing
