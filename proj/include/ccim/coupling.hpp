#pragma once

// Coupling equation at an interface point: one row per (axis, direction) relating
// the first and principal second derivatives at the point to nearby u-values,
//
//   M (u_1, u_2, u_3, u_11, u_22, u_33)^T = rhs,
//
// with crossing rows built from the jump conditions. Solving gives the derivatives
// as affine forms in u-values, from which the PDE row is assembled.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccim/affine.hpp"
#include "ccim/jumps.hpp"
#include "ccim/mixed.hpp"
#include "ccim/problem.hpp"

namespace ccim {

/// Forces the scheme kind for one pair at one point (experiments only).
struct SchemeOverride {
  Index3 point{};
  int k = 0, l = 1;
  MixedKind kind = MixedKind::Central;
};

struct CouplingOptions {
  /// Compare candidate systems by condition number when Corner and
  /// FirstDerivAssisted compete; otherwise Corner is taken.
  bool condition_tie_break = true;
  std::vector<SchemeOverride> overrides;
};

struct AssemblyContext {
  const Grid& grid;
  const Surface& surface;
  const SignField& signs;
  const Problem& problem;
  CouplingOptions options{};
};

using MatrixRow = std::array<double, 6>;

/// u(i + s e_k) - u(i) = s h u_k + h^2/2 u_kk, divided by h^2.
std::pair<MatrixRow, AffineForm> taylor_row(int k, int s, double h);

/// Row for a segment crossing the interface. `first_jump` is [u_k] and `jumps`
/// the solved second-derivative jumps at the crossing; both may still contain
/// derivative symbols, which end up in the matrix row.
std::pair<MatrixRow, AffineForm> interface_row(const Intersection& hit, const InterfaceSample& data,
                                               const JumpSolution& jumps, const AffineForm& first_jump, double h);

struct CouplingSystem {
  SmallMatrix m{6};
  std::array<AffineForm, 6> rhs;
  double condition = 0.0;
};

/// Gradient data kept per crossing for interface-gradient recovery.
struct CrossingForms {
  Intersection hit;
  Side own = Side::Minus;
  /// Own-side gradient at the crossing, and [grad u] there; forms over u-values.
  std::array<AffineForm, 3> grad_own;
  std::array<AffineForm, 3> grad_jump;
};

struct DerivativeForms {
  std::array<AffineForm, 3> first;
  std::array<AffineForm, 3> second;
  MixedForms mixed;
  std::vector<CrossingForms> crossings;
  int radius = 1;
};

struct CouplingResult {
  CouplingSystem system;
  DerivativeForms derivatives;
  std::array<MixedScheme, 3> schemes;
  /// 1, or 2 when the Corner/FirstDerivAssisted comparison ran.
  int candidates = 1;
  /// Condition number of the rejected candidate (when candidates == 2).
  double rejected_condition = 0.0;
};

/// Builds and solves the coupling system at interface point i. Throws
/// UnresolvablePoint when some pair has no mixed scheme and SingularSystem when
/// no candidate yields a usable system.
CouplingResult build_coupling(const AssemblyContext& ctx, const Index3& i);

/// Exact 1-norm condition number; +inf when singular.
double estimate_condition(const SmallMatrix& m);

/// PDE row at an interface point: the form
///   -sum_k d_k eps u_k - eps sum_k u_kk + a u_i - f
/// over u-values. The equation is form == 0.
AffineForm interface_pde_form(const AssemblyContext& ctx, const Index3& i, const DerivativeForms& d);

struct PdeRow {
  std::vector<std::pair<std::int64_t, double>> entries;
  double rhs = 0.0;
};

/// Standard 7-point row with central d_k eps terms; all neighbours on i's side.
PdeRow interior_pde_row(const AssemblyContext& ctx, const Index3& i);
PdeRow boundary_pde_row(const AssemblyContext& ctx, const Index3& i);
/// Maps a local form (u-values + constant) to global columns; the constant moves
/// to the right-hand side with flipped sign.
PdeRow globalize(const Grid& grid, const Index3& i, const AffineForm& form);

}  // namespace ccim
