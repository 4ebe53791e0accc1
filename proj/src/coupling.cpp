#include "ccim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccim/error.hpp"

namespace ccim {

namespace {

std::string where(const Index3& i) {
  std::ostringstream out;
  out << "point (" << i[0] << "," << i[1] << "," << i[2] << ")";
  return out.str();
}

inline int row_of(int k, int s) { return 2 * k + (s > 0 ? 1 : 0); }

/// Replaces u_j and u_jj by their solved forms.
AffineForm eliminate_derivatives(const AffineForm& f, const std::vector<AffineForm>& x) {
  AffineForm out = f;
  for (int j = 0; j < 3; ++j)
    for (Symbol s : {symbol::first_derivative(j), symbol::pure_second(j)}) {
      const double c = out[s];
      if (c == 0.0) continue;
      out[s] = 0.0;
      out.add_scaled(c, x[symbol::is_first(s) ? j : 3 + j]);
    }
  out.prune();
  return out;
}

MixedForms resolve_mixed_jumps(const MixedForms& mixed, const JumpSolution& jumps) {
  MixedForms out = mixed;
  for (const auto& [k, l] : symbol::kPairs) {
    auto& f = out[symbol::pair_index(k, l)];
    const Symbol mj = symbol::mixed_jump(k, l);
    const double c = f[mj];
    if (c == 0.0) continue;
    f[mj] = 0.0;
    f.add_scaled(c, jumps(k, l));
  }
  return out;
}

int stencil_radius(const AffineForm& f) {
  int r = 0;
  for (Symbol s = 0; s < kGridSymbols; ++s)
    if (f[s] != 0.0)
      for (int v : symbol::offset_of(s)) r = std::max(r, std::abs(v));
  return r;
}

struct Crossing {
  Intersection hit;
  InterfaceSample data;
};

CouplingResult build_with(const AssemblyContext& ctx, const Index3& i, const std::array<MixedScheme, 3>& schemes,
                          const std::array<std::optional<Crossing>, 6>& crossings) {
  const double h = ctx.grid.h();
  const Side own = ctx.signs.side(i);
  MixedForms mixed;
  for (int p = 0; p < 3; ++p) mixed[p] = scheme_form(schemes[p], h);

  CouplingResult result;
  result.schemes = schemes;
  CouplingSystem& sys = result.system;
  std::vector<CrossingForms> pending;
  std::optional<MixedForms> first_resolution;

  for (int k = 0; k < 3; ++k)
    for (int s : {-1, 1}) {
      const int r = row_of(k, s);
      std::pair<MatrixRow, AffineForm> row;
      if (!crossings[r]) {
        row = taylor_row(k, s, h);
      } else {
        const Intersection& hit = crossings[r]->hit;
        const InterfaceSample& data = crossings[r]->data;
        const auto own_side = expand_own_side(hit, h, mixed);
        const SmallMatrix g = assemble_G(hit.geometry);
        const auto jump_rhs = assemble_jump_rhs(hit.geometry, data, own_side, mixed);
        const JumpSolution jumps = solve_jumps(g, jump_rhs, where(i));
        const MixedForms resolved = resolve_mixed_jumps(mixed, jumps);
        if (!first_resolution) first_resolution = resolved;

        CrossingForms cf;
        cf.hit = hit;
        cf.own = own;
        cf.grad_own = expand_own_side(hit, h, resolved).gradient;
        for (int j = 0; j < 3; ++j) cf.grad_jump[j] = first_derivative_jump(j, hit.geometry, data, cf.grad_own);
        row = interface_row(hit, data, jumps, cf.grad_jump[k], h);
        pending.push_back(std::move(cf));
      }
      for (int c = 0; c < 6; ++c) sys.m(r, c) = row.first[c];
      sys.rhs[r] = std::move(row.second);
    }

  sys.condition = estimate_condition(sys.m);
  if (!(sys.condition <= kMaxFormSystemCondition))
    throw SingularSystem("coupling matrix singular or ill-conditioned at " + where(i));
  const auto x = solve_linear_forms(sys.m, sys.rhs, "coupling matrix at " + where(i));

  DerivativeForms& d = result.derivatives;
  for (int j = 0; j < 3; ++j) {
    d.first[j] = x[j];
    d.second[j] = x[3 + j];
    d.first[j].prune();
    d.second[j].prune();
    d.radius = std::max({d.radius, stencil_radius(d.first[j]), stencil_radius(d.second[j])});
  }
  const MixedForms& m = first_resolution ? *first_resolution : mixed;
  for (int p = 0; p < 3; ++p) d.mixed[p] = eliminate_derivatives(m[p], x);
  for (auto& cf : pending) {
    for (int j = 0; j < 3; ++j) {
      cf.grad_own[j] = eliminate_derivatives(cf.grad_own[j], x);
      cf.grad_jump[j] = eliminate_derivatives(cf.grad_jump[j], x);
    }
  }
  d.crossings = std::move(pending);
  return result;
}

}  // namespace

double estimate_condition(const SmallMatrix& m) { return condition_number_1(m); }

std::pair<MatrixRow, AffineForm> taylor_row(int k, int s, double h) {
  MatrixRow row{};
  row[k] = s / h;
  row[3 + k] = 0.5;
  AffineForm rhs = AffineForm::of(symbol::grid_value(axis_offset(k, s)));
  rhs[symbol::grid_value({0, 0, 0})] -= 1.0;
  rhs *= 1.0 / (h * h);
  return {row, rhs};
}

std::pair<MatrixRow, AffineForm> interface_row(const Intersection& hit, const InterfaceSample& data,
                                               const JumpSolution& jumps, const AffineForm& first_jump, double h) {
  // u_far = u_own(x^) + toward * tau + s beta h (u_own,k(x^) + toward [u_k])
  //         + (beta h)^2 / 2 (u_kk + toward [u_kk])
  // collapses (alpha + beta = 1) to
  // u_far - u_i = s h u_k + h^2/2 u_kk + toward (tau + s beta h [u_k] + (beta h)^2/2 [u_kk]).
  const int k = hit.axis, s = hit.direction;
  const double toward = toward_other(data.own);
  const double bh = hit.beta * h;
  AffineForm r = AffineForm::of(symbol::grid_value(axis_offset(k, s)));
  r[symbol::grid_value({0, 0, 0})] -= 1.0;
  r[symbol::first_derivative(k)] -= s * h;
  r[symbol::pure_second(k)] -= 0.5 * h * h;
  r[symbol::kConstant] -= toward * data.tau;
  r.add_scaled(-toward * s * bh, first_jump);
  r.add_scaled(-toward * 0.5 * bh * bh, jumps(k, k));

  // r = c . (u_1..u_33) + rest = 0  ->  -c . x = rest
  const double inv_h2 = 1.0 / (h * h);
  MatrixRow row{};
  for (int j = 0; j < 3; ++j) {
    row[j] = -r[symbol::first_derivative(j)] * inv_h2;
    row[3 + j] = -r[symbol::pure_second(j)] * inv_h2;
    r[symbol::first_derivative(j)] = 0.0;
    r[symbol::pure_second(j)] = 0.0;
  }
  r *= inv_h2;
  return {row, r};
}

CouplingResult build_coupling(const AssemblyContext& ctx, const Index3& i) {
  const SignField& signs = ctx.signs;
  const Side own = signs.side(i);

  std::array<std::optional<Crossing>, 6> crossings;
  for (int k = 0; k < 3; ++k)
    for (int s : {-1, 1}) {
      auto hit = find_intersection(signs, ctx.surface, i, k, s);
      if (!hit) continue;
      crossings[row_of(k, s)] = Crossing{*hit, sample_interface(ctx.problem, *hit, own)};
    }

  std::array<std::vector<MixedScheme>, 3> ranked;
  for (const auto& [k, l] : symbol::kPairs) {
    auto& list = ranked[symbol::pair_index(k, l)];
    list = rank_schemes(enumerate_schemes(signs, i, k, l));
    for (const auto& o : ctx.options.overrides) {
      if (o.point != i || std::min(o.k, o.l) != k || std::max(o.k, o.l) != l) continue;
      std::stable_partition(list.begin(), list.end(), [&](const MixedScheme& s) { return s.kind == o.kind; });
    }
    if (list.empty())
      throw UnresolvablePoint("no mixed-derivative scheme for u_" + std::to_string(k) + std::to_string(l) + " at " +
                              where(i) + "; refine the grid");
  }

  std::array<MixedScheme, 3> primary;
  std::array<MixedScheme, 3> alternative;
  bool tie = false;
  for (int p = 0; p < 3; ++p) {
    primary[p] = alternative[p] = ranked[p].front();
    if (kind_tier(primary[p].kind) != 2) continue;
    const auto corner = best_of_kind(ranked[p], MixedKind::Corner);
    const auto fda = best_of_kind(ranked[p], MixedKind::FirstDerivAssisted);
    if (corner && fda) {
      primary[p] = *corner;
      alternative[p] = *fda;
      tie = true;
    }
  }

  std::vector<std::array<MixedScheme, 3>> candidates{primary};
  if (tie && ctx.options.condition_tie_break) candidates.push_back(alternative);

  std::optional<CouplingResult> best;
  std::string failure;
  double rejected = 0.0;
  for (const auto& c : candidates) {
    try {
      CouplingResult r = build_with(ctx, i, c, crossings);
      if (!best) {
        best = std::move(r);
      } else if (r.system.condition < best->system.condition) {
        rejected = best->system.condition;
        best = std::move(r);
      } else {
        rejected = r.system.condition;
      }
    } catch (const SingularSystem& e) {
      failure = e.what();
    }
  }
  if (best) {
    best->candidates = static_cast<int>(candidates.size());
    best->rejected_condition = rejected;
    return *best;
  }

  // Fall back through lower-ranked schemes, demoting the worst-ranked pair first.
  std::array<std::size_t, 3> pick{0, 0, 0};
  std::array<MixedScheme, 3> current = primary;
  for (int attempt = 0; attempt < 12; ++attempt) {
    int worst = -1;
    for (int p = 0; p < 3; ++p)
      if (pick[p] + 1 < ranked[p].size() &&
          (worst < 0 || kind_tier(current[p].kind) > kind_tier(current[worst].kind)))
        worst = p;
    if (worst < 0) break;
    current[worst] = ranked[worst][++pick[worst]];
    try {
      CouplingResult r = build_with(ctx, i, current, crossings);
      return r;
    } catch (const SingularSystem& e) {
      failure = e.what();
    }
  }
  throw SingularSystem(failure);
}

AffineForm interface_pde_form(const AssemblyContext& ctx, const Index3& i, const DerivativeForms& d) {
  const Side side = ctx.signs.side(i);
  const Vec3 x = ctx.grid.point(i);
  const double eps = ctx.problem.eps(side, x);
  const Vec3 ge = ctx.problem.grad_eps(side, x);
  AffineForm form = AffineForm::of(symbol::grid_value({0, 0, 0}), ctx.problem.a(side, x));
  for (int k = 0; k < 3; ++k) {
    if (ge[k] != 0.0) form.add_scaled(-ge[k], d.first[k]);
    form.add_scaled(-eps, d.second[k]);
  }
  form[symbol::kConstant] -= ctx.problem.f(side, x);
  return form;
}

PdeRow globalize(const Grid& grid, const Index3& i, const AffineForm& form) {
  PdeRow row;
  for (Symbol s = 0; s < kGridSymbols; ++s) {
    if (form[s] == 0.0) continue;
    const Index3 j = i + symbol::offset_of(s);
    if (!grid.in_bounds(j)) throw Error("stencil leaves the grid at " + where(i));
    row.entries.emplace_back(grid.linear(j), form[s]);
  }
  row.rhs = -form.constant_term();
  return row;
}

PdeRow interior_pde_row(const AssemblyContext& ctx, const Index3& i) {
  const Grid& g = ctx.grid;
  const double h = g.h();
  const Side side = ctx.signs.side(i);
  const Vec3 x = g.point(i);
  const double eps = ctx.problem.eps(side, x);
  const Vec3 ge = ctx.problem.grad_eps(side, x);
  PdeRow row;
  row.entries.reserve(7);
  const double a = ctx.problem.a(side, x);
  row.entries.emplace_back(g.linear(i), a == 0.0 ? 6.0 * eps / (h * h) : 6.0 * eps / (h * h) + a);
  for (int k = 0; k < 3; ++k)
    for (int s : {-1, 1}) {
      double v = -eps / (h * h);
      if (ge[k] != 0.0) v -= s * ge[k] / (2.0 * h);
      row.entries.emplace_back(g.linear(i + axis_offset(k, s)), v);
    }
  row.rhs = ctx.problem.f(side, x);
  return row;
}

PdeRow boundary_pde_row(const AssemblyContext& ctx, const Index3& i) {
  PdeRow row;
  row.entries.emplace_back(ctx.grid.linear(i), 1.0);
  row.rhs = ctx.problem.boundary(ctx.signs.side(i), ctx.grid.point(i));
  return row;
}

}  // namespace ccim
