#pragma once

// Jumps of first and second derivatives at an interface crossing, written as affine
// forms over the local unknowns of the base grid point.
//
// Brackets follow [v] = v+ - v-. The base point lies on side `own`; quantities on the
// base point's side are expanded by Taylor series from the grid point:
//   u_own(x^)      = u_i + s a h u_k + (a h)^2 / 2 u_kk
//   d_j u_own(x^)  = u_j + s a h u_jk
//   Hess u_own(x^) = Hess u(x_i)
// where the crossing lies along axis k in direction s at fraction a.

#include <array>
#include <string>

#include "ccim/affine.hpp"
#include "ccim/grid.hpp"
#include "ccim/problem.hpp"

namespace ccim {

/// Problem data evaluated at one crossing.
struct InterfaceSample {
  Side own = Side::Minus;
  std::array<double, 2> eps{};       // {minus, plus}
  std::array<Vec3, 2> grad_eps{};
  std::array<double, 2> a{};
  std::array<double, 2> f{};
  double tau = 0.0;
  Vec3 grad_tau{};
  Mat3 hess_tau{};
  double sigma = 0.0;
  std::array<double, 2> sigma_tangential{};

  static constexpr int slot(Side s) { return s == Side::Minus ? 0 : 1; }
  double eps_own() const { return eps[slot(own)]; }
  double eps_other() const { return eps[slot(opposite(own))]; }
  double eps_jump() const { return eps[1] - eps[0]; }
};

InterfaceSample sample_interface(const Problem& problem, const Intersection& hit, Side own);

/// Mixed derivative forms u_kl at the base point, indexed by symbol::pair_index.
using MixedForms = std::array<AffineForm, 3>;

/// Hessian entry (j,l) of u at the base point: u_jj symbol on the diagonal, the
/// mixed form otherwise.
AffineForm hessian_entry(const MixedForms& mixed, int j, int l);

struct OwnSideExpansion {
  AffineForm value;
  std::array<AffineForm, 3> gradient;
};

OwnSideExpansion expand_own_side(const Intersection& hit, double h, const MixedForms& mixed);

/// [grad u . n] = (sigma - [eps] grad u_own . n) / eps_other
AffineForm normal_flux_jump(const InterfaceSample& data, const SurfaceGeometry& geom,
                            const std::array<AffineForm, 3>& grad_own);

/// [u_k] = [grad u . n] n_k + sum_j (grad tau . s_j)(s_j . e_k)
AffineForm first_derivative_jump(int k, const SurfaceGeometry& geom, const InterfaceSample& data,
                                 const std::array<AffineForm, 3>& grad_own);
AffineForm first_derivative_jump(int k, const Intersection& hit, const InterfaceSample& data, const MixedForms& mixed,
                                 double h);

/// Index of the unknown [u_jl] in the jump system: 0..2 principal, 3..5 mixed pairs.
constexpr int jump_unknown(int j, int l) { return j == l ? j : 3 + symbol::pair_index(j < l ? j : l, j < l ? l : j); }

/// Rows: tangential pairs (s0,s0), (s0,s1), (s1,s1); flux rows s0, s1; Laplacian row.
SmallMatrix assemble_G(const SurfaceGeometry& geom);

std::array<AffineForm, 6> assemble_jump_rhs(const SurfaceGeometry& geom, const InterfaceSample& data,
                                            const OwnSideExpansion& own, const MixedForms& mixed);

/// Jumps [u_jl] in jump_unknown order, free of mixed-jump symbols.
struct JumpSolution {
  std::array<AffineForm, 6> forms;
  const AffineForm& operator()(int j, int l) const { return forms[jump_unknown(j, l)]; }
};

/// Moves mixed-jump symbols of the right-hand side into the matrix, then solves.
/// Throws SingularSystem when the modified matrix is singular.
JumpSolution solve_jumps(const SmallMatrix& g, const std::array<AffineForm, 6>& rhs, const std::string& context = {});

}  // namespace ccim
