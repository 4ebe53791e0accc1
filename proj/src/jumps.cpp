#include "ccim/jumps.hpp"

#include <vector>

namespace ccim {

InterfaceSample sample_interface(const Problem& problem, const Intersection& hit, Side own) {
  InterfaceSample d;
  d.own = own;
  const Vec3& x = hit.location;
  for (Side s : {Side::Minus, Side::Plus}) {
    const int i = InterfaceSample::slot(s);
    d.eps[i] = problem.eps(s, x);
    d.grad_eps[i] = problem.grad_eps(s, x);
    d.a[i] = problem.a(s, x);
    d.f[i] = problem.f(s, x);
  }
  d.tau = problem.tau(x);
  d.grad_tau = problem.grad_tau(x);
  d.hess_tau = problem.hess_tau(x);
  d.sigma = problem.sigma(x, hit.geometry);
  for (int m = 0; m < 2; ++m) d.sigma_tangential[m] = problem.sigma_tangential(x, hit.geometry, hit.geometry.tangents[m]);
  return d;
}

AffineForm hessian_entry(const MixedForms& mixed, int j, int l) {
  if (j == l) return AffineForm::of(symbol::pure_second(j));
  return mixed[symbol::pair_index(std::min(j, l), std::max(j, l))];
}

OwnSideExpansion expand_own_side(const Intersection& hit, double h, const MixedForms& mixed) {
  const int k = hit.axis;
  const double step = hit.direction * hit.alpha * h;
  OwnSideExpansion e;
  e.value = AffineForm::of(symbol::grid_value({0, 0, 0}));
  e.value[symbol::first_derivative(k)] += step;
  e.value[symbol::pure_second(k)] += 0.5 * step * step;
  for (int j = 0; j < 3; ++j) {
    e.gradient[j] = AffineForm::of(symbol::first_derivative(j));
    e.gradient[j].add_scaled(step, hessian_entry(mixed, j, k));
  }
  return e;
}

namespace {

AffineForm dot_forms(const std::array<AffineForm, 3>& forms, const Vec3& v) {
  AffineForm out;
  for (int j = 0; j < 3; ++j)
    if (v[j] != 0.0) out.add_scaled(v[j], forms[j]);
  return out;
}

/// a^T Hess b over the base-point Hessian forms.
AffineForm hessian_bilinear(const MixedForms& mixed, const Vec3& a, const Vec3& b) {
  AffineForm out;
  for (int j = 0; j < 3; ++j) out[symbol::pure_second(j)] += a[j] * b[j];
  for (const auto& [j, l] : symbol::kPairs) {
    const double c = a[j] * b[l] + a[l] * b[j];
    if (c != 0.0) out.add_scaled(c, mixed[symbol::pair_index(j, l)]);
  }
  return out;
}

/// Coefficients of a^T X b on the jump unknowns for symmetric X.
std::array<double, 6> bilinear_row(const Vec3& a, const Vec3& b) {
  std::array<double, 6> row{};
  for (int j = 0; j < 3; ++j) row[jump_unknown(j, j)] = a[j] * b[j];
  for (const auto& [j, l] : symbol::kPairs) row[jump_unknown(j, l)] = a[j] * b[l] + a[l] * b[j];
  return row;
}

}  // namespace

AffineForm normal_flux_jump(const InterfaceSample& data, const SurfaceGeometry& geom,
                            const std::array<AffineForm, 3>& grad_own) {
  AffineForm out = AffineForm::constant(data.sigma);
  out.add_scaled(-data.eps_jump(), dot_forms(grad_own, geom.normal));
  out *= 1.0 / data.eps_other();
  return out;
}

AffineForm first_derivative_jump(int k, const SurfaceGeometry& geom, const InterfaceSample& data,
                                 const std::array<AffineForm, 3>& grad_own) {
  AffineForm out = geom.normal[k] * normal_flux_jump(data, geom, grad_own);
  double tangential = 0.0;
  for (const auto& t : geom.tangents) tangential += dot(data.grad_tau, t) * t[k];
  out[symbol::kConstant] += tangential;
  return out;
}

AffineForm first_derivative_jump(int k, const Intersection& hit, const InterfaceSample& data, const MixedForms& mixed,
                                 double h) {
  return first_derivative_jump(k, hit.geometry, data, expand_own_side(hit, h, mixed).gradient);
}

SmallMatrix assemble_G(const SurfaceGeometry& geom) {
  SmallMatrix g(6);
  const auto& s = geom.tangents;
  const std::array<std::array<int, 2>, 3> tt{{{0, 0}, {0, 1}, {1, 1}}};
  int r = 0;
  for (const auto& [m, n] : tt) {
    const auto row = bilinear_row(s[n], s[m]);
    for (int c = 0; c < 6; ++c) g(r, c) = row[c];
    ++r;
  }
  for (int m = 0; m < 2; ++m) {
    const auto row = bilinear_row(s[m], geom.normal);
    for (int c = 0; c < 6; ++c) g(r, c) = row[c];
    ++r;
  }
  for (int j = 0; j < 3; ++j) g(r, jump_unknown(j, j)) = 1.0;
  return g;
}

std::array<AffineForm, 6> assemble_jump_rhs(const SurfaceGeometry& geom, const InterfaceSample& data,
                                            const OwnSideExpansion& own, const MixedForms& mixed) {
  const auto& s = geom.tangents;
  const Vec3& n = geom.normal;
  const Side other = opposite(data.own);
  const int t = InterfaceSample::slot(other);
  const double eps_t = data.eps[t];
  const double eps_jump = data.eps_jump();

  const AffineForm flux_jump = normal_flux_jump(data, geom, own.gradient);  // [grad u . n]
  const AffineForm grad_own_n = dot_forms(own.gradient, n);
  std::array<Vec3, 2> dn_s{mul(geom.normal_jacobian, s[0]), mul(geom.normal_jacobian, s[1])};
  const std::array<double, 2> dtau_s{dot(data.grad_tau, s[0]), dot(data.grad_tau, s[1])};

  std::array<AffineForm, 6> rhs;
  int r = 0;

  // s_n^T [Hess u] s_m = s_n^T Hess(tau) s_m + ([grad u . n] - grad tau . n) s_n^T (grad n) s_m
  const std::array<std::array<int, 2>, 3> tt{{{0, 0}, {0, 1}, {1, 1}}};
  for (const auto& [m, nn] : tt) {
    const double curv = dot(s[nn], dn_s[m]);
    AffineForm row = AffineForm::constant(bilinear(s[nn], data.hess_tau, s[m]) - dot(data.grad_tau, n) * curv);
    row.add_scaled(curv, flux_jump);
    rhs[r++] = row;
  }

  // Tangential derivative of the flux condition.
  for (int m = 0; m < 2; ++m) {
    double constant = data.sigma_tangential[m];
    for (int k = 0; k < 2; ++k) constant -= eps_t * dtau_s[k] * dot(s[k], dn_s[m]);
    AffineForm row = AffineForm::constant(constant);
    row.add_scaled(-eps_jump, hessian_bilinear(mixed, s[m], n));
    row.add_scaled(-eps_jump, dot_forms(own.gradient, dn_s[m]));
    row.add_scaled(-dot(data.grad_eps[t], s[m]), flux_jump);
    row.add_scaled(-(dot(data.grad_eps[1], s[m]) - dot(data.grad_eps[0], s[m])), grad_own_n);
    row *= 1.0 / eps_t;
    rhs[r++] = row;
  }

  // Jump of the PDE divided by eps on each side:
  // [Lap u] = -[f/eps] + (a_t/eps_t) tau + [a/eps] u_own - (grad eps_t / eps_t) . [grad u]
  //           - [grad eps / eps] . grad u_own
  {
    const double f_over_eps_jump = data.f[1] / data.eps[1] - data.f[0] / data.eps[0];
    const double a_over_eps_jump = data.a[1] / data.eps[1] - data.a[0] / data.eps[0];
    AffineForm row = AffineForm::constant(-f_over_eps_jump + data.a[t] / eps_t * data.tau);
    row.add_scaled(a_over_eps_jump, own.value);
    const Vec3 ge_t = (1.0 / eps_t) * data.grad_eps[t];
    // [grad u] = [grad u . n] n + sum_j (grad tau . s_j) s_j
    row.add_scaled(-dot(ge_t, n), flux_jump);
    row[symbol::kConstant] -= dtau_s[0] * dot(ge_t, s[0]) + dtau_s[1] * dot(ge_t, s[1]);
    const Vec3 ge_jump = (1.0 / data.eps[1]) * data.grad_eps[1] - (1.0 / data.eps[0]) * data.grad_eps[0];
    row.add_scaled(-1.0, dot_forms(own.gradient, ge_jump));
    rhs[r++] = row;
  }
  return rhs;
}

JumpSolution solve_jumps(const SmallMatrix& g, const std::array<AffineForm, 6>& rhs, const std::string& context) {
  SmallMatrix lhs = g;
  std::array<AffineForm, 6> b = rhs;
  for (int r = 0; r < 6; ++r)
    for (const auto& [j, l] : symbol::kPairs) {
      const Symbol mj = symbol::mixed_jump(j, l);
      const double c = b[r][mj];
      if (c == 0.0) continue;
      lhs(r, jump_unknown(j, l)) -= c;
      b[r][mj] = 0.0;
    }
  const auto x = solve_linear_forms(lhs, b, context.empty() ? "jump system" : "jump system, " + context);
  JumpSolution sol;
  for (int i = 0; i < 6; ++i) sol.forms[i] = x[i];
  return sol;
}

}  // namespace ccim
