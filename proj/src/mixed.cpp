#include "ccim/mixed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccim {

std::string_view kind_name(MixedKind kind) {
  switch (kind) {
    case MixedKind::Central: return "central";
    case MixedKind::Biased: return "biased";
    case MixedKind::Corner: return "corner";
    case MixedKind::FirstDerivAssisted: return "first_deriv";
    case MixedKind::SecondDerivAssisted: return "second_deriv";
    case MixedKind::ShiftOutOfPlane: return "shift_out";
    case MixedKind::ShiftInPlane: return "shift_in";
    case MixedKind::CrossInterface: return "cross";
  }
  return "?";
}

int kind_tier(MixedKind kind) {
  switch (kind) {
    case MixedKind::Central: return 0;
    case MixedKind::Biased: return 1;
    case MixedKind::Corner:
    case MixedKind::FirstDerivAssisted: return 2;
    case MixedKind::SecondDerivAssisted: return 3;
    case MixedKind::ShiftOutOfPlane: return 4;
    case MixedKind::ShiftInPlane: return 5;
    case MixedKind::CrossInterface: return 6;
  }
  return 7;
}

namespace {

Index3 combo(const Index3& base, int a, int da, int b, int db) {
  Index3 o = base;
  o[a] += da;
  o[b] += db;
  return o;
}

int other_axis(const MixedScheme& s) { return s.axis == s.k ? s.l : s.k; }
int sigma_of(const MixedScheme& s, int axis) { return axis == s.k ? s.sigma[0] : s.sigma[1]; }

/// u-value points of the stencil kind `s.stencil` centred at s.base.
std::vector<Index3> stencil_points(const MixedScheme& s) {
  const int k = s.k, l = s.l;
  const Index3& b = s.base;
  switch (s.stencil) {
    case MixedKind::Central:
      return {combo(b, k, 1, l, 1), combo(b, k, -1, l, 1), combo(b, k, 1, l, -1), combo(b, k, -1, l, -1)};
    case MixedKind::Biased: {
      const int c = s.axis, o = other_axis(s), so = sigma_of(s, o);
      // full 2x3 block
      return {combo(b, c, -1, o, 0), combo(b, c, 0, o, 0),   combo(b, c, 1, o, 0),
              combo(b, c, -1, o, -so), combo(b, c, 0, o, -so), combo(b, c, 1, o, -so)};
    }
    case MixedKind::Corner:
      return {b, combo(b, k, -s.sigma[0], l, 0), combo(b, k, 0, l, -s.sigma[1]),
              combo(b, k, -s.sigma[0], l, -s.sigma[1])};
    default: break;
  }
  return {};
}

}  // namespace

std::vector<Index3> scheme_points(const MixedScheme& s) {
  switch (s.kind) {
    case MixedKind::FirstDerivAssisted: {
      const int c = s.axis, o = other_axis(s), so = sigma_of(s, o);
      return {combo({0, 0, 0}, c, 1, o, -so), combo({0, 0, 0}, c, -1, o, -so)};
    }
    case MixedKind::SecondDerivAssisted: {
      const int c = s.axis, o = other_axis(s), sc = sigma_of(s, c), so = sigma_of(s, o);
      return {combo({0, 0, 0}, c, 0, o, -so), combo({0, 0, 0}, c, -sc, o, -so)};
    }
    default: return stencil_points(s);
  }
}

namespace {

double clearance_of(const SignField& signs, const Index3& i, const std::vector<Index3>& pts) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) c = std::min(c, std::fabs(signs.phi(i + p)));
  return c;
}

bool all_on(const SignField& signs, const Index3& i, const std::vector<Index3>& pts, Side side) {
  const Grid& g = signs.grid();
  for (const auto& p : pts) {
    const Index3 q = i + p;
    if (!g.in_bounds(q) || signs.side(q) != side) return false;
  }
  return true;
}

/// Value-only stencils at offset `base` whose points all lie on `side`.
std::vector<MixedScheme> value_stencils(const SignField& signs, const Index3& i, int k, int l, const Index3& base,
                                        Side side) {
  std::vector<MixedScheme> out;
  auto consider = [&](MixedScheme s) {
    const auto pts = stencil_points(s);
    if (!all_on(signs, i, pts, side)) return;
    s.clearance = clearance_of(signs, i, pts);
    out.push_back(s);
  };
  MixedScheme proto;
  proto.k = k;
  proto.l = l;
  proto.base = base;

  MixedScheme c = proto;
  c.kind = c.stencil = MixedKind::Central;
  consider(c);
  for (int axis : {k, l})
    for (int so : {1, -1}) {
      MixedScheme b = proto;
      b.kind = b.stencil = MixedKind::Biased;
      b.axis = axis;
      b.sigma = axis == k ? std::array<int, 2>{1, so} : std::array<int, 2>{so, 1};
      consider(b);
    }
  for (int sk : {1, -1})
    for (int sl : {1, -1}) {
      MixedScheme r = proto;
      r.kind = r.stencil = MixedKind::Corner;
      r.sigma = {sk, sl};
      consider(r);
    }
  return out;
}

int radius_of(const std::vector<Index3>& pts) {
  int r = 0;
  for (const auto& p : pts)
    for (int v : p) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace

std::vector<MixedScheme> enumerate_schemes(const SignField& signs, const Index3& i, int k, int l) {
  if (k > l) std::swap(k, l);
  const Side own = signs.side(i);
  std::vector<MixedScheme> out = value_stencils(signs, i, k, l, {0, 0, 0}, own);

  MixedScheme proto;
  proto.k = k;
  proto.l = l;
  auto consider = [&](MixedScheme s) {
    const auto pts = scheme_points(s);
    if (!all_on(signs, i, pts, own)) return;
    s.clearance = clearance_of(signs, i, pts);
    out.push_back(s);
  };
  for (int axis : {k, l})
    for (int so : {1, -1}) {
      MixedScheme f = proto;
      f.kind = f.stencil = MixedKind::FirstDerivAssisted;
      f.axis = axis;
      f.sigma = axis == k ? std::array<int, 2>{1, so} : std::array<int, 2>{so, 1};
      consider(f);
    }
  for (int axis : {k, l})
    for (int sc : {1, -1})
      for (int so : {1, -1}) {
        MixedScheme f = proto;
        f.kind = f.stencil = MixedKind::SecondDerivAssisted;
        f.axis = axis;
        f.sigma = axis == k ? std::array<int, 2>{sc, so} : std::array<int, 2>{so, sc};
        consider(f);
      }

  const Grid& g = signs.grid();
  for (int m = 0; m < 3; ++m)
    for (int s : {1, -1}) {
      const Index3 nb = axis_offset(m, s);
      if (!g.in_bounds(i + nb)) continue;
      const bool same = signs.side(i + nb) == own;
      const Side side = same ? own : opposite(own);
      for (MixedScheme v : value_stencils(signs, i, k, l, nb, side)) {
        v.kind = !same ? MixedKind::CrossInterface
                 : (m == k || m == l) ? MixedKind::ShiftInPlane
                                      : MixedKind::ShiftOutOfPlane;
        if (!same) v.jump_coefficient = -toward_other(own);
        out.push_back(v);
      }
    }
  for (auto& s : out) s.radius = radius_of(scheme_points(s));
  return out;
}

AffineForm scheme_form(const MixedScheme& s, double h) {
  const double h2 = h * h;
  auto gv = [](const Index3& o) { return symbol::grid_value(o); };
  AffineForm f;
  const int k = s.k, l = s.l;
  const Index3& b = s.base;
  switch (s.kind) {
    case MixedKind::FirstDerivAssisted: {
      // sigma_o / (2h^2) (2h u_c - u(e_c - sigma_o e_o) + u(-e_c - sigma_o e_o))
      const int c = s.axis, o = other_axis(s), so = sigma_of(s, o);
      const double w = so / (2.0 * h2);
      f[symbol::first_derivative(c)] += w * 2.0 * h;
      f[gv(combo({0, 0, 0}, c, 1, o, -so))] -= w;
      f[gv(combo({0, 0, 0}, c, -1, o, -so))] += w;
      return f;
    }
    case MixedKind::SecondDerivAssisted: {
      // sigma_c sigma_o / h^2 (h sigma_c u_c - h^2/2 u_cc - u(-sigma_o e_o) + u(-sigma_c e_c - sigma_o e_o))
      const int c = s.axis, o = other_axis(s), sc = sigma_of(s, c), so = sigma_of(s, o);
      const double w = sc * so / h2;
      f[symbol::first_derivative(c)] += w * h * sc;
      f[symbol::pure_second(c)] -= w * 0.5 * h2;
      f[gv(combo({0, 0, 0}, c, 0, o, -so))] -= w;
      f[gv(combo({0, 0, 0}, c, -sc, o, -so))] += w;
      return f;
    }
    default: break;
  }
  switch (s.stencil) {
    case MixedKind::Central: {
      const double w = 1.0 / (4.0 * h2);
      f[gv(combo(b, k, 1, l, 1))] += w;
      f[gv(combo(b, k, -1, l, 1))] -= w;
      f[gv(combo(b, k, 1, l, -1))] -= w;
      f[gv(combo(b, k, -1, l, -1))] += w;
      break;
    }
    case MixedKind::Biased: {
      // sigma_o / (2h^2) (u(e_c) - u(e_c - sigma_o e_o) - u(-e_c) + u(-e_c - sigma_o e_o))
      const int c = s.axis, o = other_axis(s), so = sigma_of(s, o);
      const double w = so / (2.0 * h2);
      f[gv(combo(b, c, 1, o, 0))] += w;
      f[gv(combo(b, c, 1, o, -so))] -= w;
      f[gv(combo(b, c, -1, o, 0))] -= w;
      f[gv(combo(b, c, -1, o, -so))] += w;
      break;
    }
    case MixedKind::Corner: {
      const int sk = s.sigma[0], sl = s.sigma[1];
      const double w = sk * sl / h2;
      f[gv(b)] += w;
      f[gv(combo(b, k, -sk, l, 0))] -= w;
      f[gv(combo(b, k, 0, l, -sl))] -= w;
      f[gv(combo(b, k, -sk, l, -sl))] += w;
      break;
    }
    default: break;
  }
  if (s.kind == MixedKind::CrossInterface) f[symbol::mixed_jump(k, l)] += s.jump_coefficient;
  return f;
}

std::vector<MixedScheme> rank_schemes(std::vector<MixedScheme> available) {
  auto stencil_tier = [](const MixedScheme& s) { return kind_tier(s.stencil); };
  std::stable_sort(available.begin(), available.end(), [&](const MixedScheme& a, const MixedScheme& b) {
    const int ta = kind_tier(a.kind), tb = kind_tier(b.kind);
    if (ta != tb) return ta < tb;
    // Corner before FirstDerivAssisted within the shared tier; the coupling
    // module decides between them by condition number.
    if (a.kind != b.kind) return a.kind < b.kind;
    const int sa = stencil_tier(a), sb = stencil_tier(b);
    if (sa != sb) return sa < sb;
    return a.clearance > b.clearance;
  });
  return available;
}

std::optional<MixedScheme> best_of_kind(const std::vector<MixedScheme>& ranked, MixedKind kind) {
  for (const auto& s : ranked)
    if (s.kind == kind) return s;
  return std::nullopt;
}

}  // namespace ccim
