#pragma once

// Approximations of the mixed derivative u_kl at an interface point.
//
// Every scheme is written for one orientation and generalized by e_k -> sigma_k e_k,
// e_l -> sigma_l e_l. Forms are over the local symbols of the base point; only
// same-side u-values are used, except CrossInterface which reads the far side and
// corrects with the mixed-derivative jump.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "ccim/affine.hpp"
#include "ccim/grid.hpp"

namespace ccim {

enum class MixedKind {
  Central,              // 4 diagonal neighbours
  Biased,               // 2x3 block, one-sided across `axis`
  Corner,               // 2x2 block containing the point
  FirstDerivAssisted,   // two points plus u_axis
  SecondDerivAssisted,  // two points plus u_axis and u_axis,axis
  ShiftOutOfPlane,      // u-value scheme at a same-side neighbour off the kl-plane
  ShiftInPlane,         // same, neighbour in the kl-plane
  CrossInterface,       // u-value scheme at a far-side neighbour minus the jump
};

std::string_view kind_name(MixedKind kind);
/// Ranking tier: lower is preferred. Corner and FirstDerivAssisted share a tier.
int kind_tier(MixedKind kind);
/// True for schemes built from u-values only (usable at a shifted base).
inline bool is_value_only(MixedKind kind) {
  return kind == MixedKind::Central || kind == MixedKind::Biased || kind == MixedKind::Corner;
}

struct MixedScheme {
  MixedKind kind = MixedKind::Central;
  int k = 0, l = 1;  // k < l
  /// For the value-only stencil (the scheme itself, or the one at `base`):
  MixedKind stencil = MixedKind::Central;
  /// Biased: the axis spanned symmetrically. FDA/SDA: the axis whose derivatives are used.
  int axis = 0;
  /// (sigma_k, sigma_l)
  std::array<int, 2> sigma{1, 1};
  /// Offset of the stencil centre from the point (nonzero for shifts and CrossInterface).
  Index3 base{0, 0, 0};
  /// Coefficient on the mixed-jump symbol (CrossInterface only): -(far - own) sign.
  double jump_coefficient = 0.0;
  /// min |phi| over the u-values used.
  double clearance = 0.0;
  int radius = 1;
};

/// Offsets (relative to the point) of the u-values a scheme reads.
std::vector<Index3> scheme_points(const MixedScheme& scheme);

/// Every applicable scheme for the pair (k, l) at point i, all orientations.
/// Stencil points must lie inside the grid.
std::vector<MixedScheme> enumerate_schemes(const SignField& signs, const Index3& i, int k, int l);

AffineForm scheme_form(const MixedScheme& scheme, double h);

/// Stable order: tier, then inner stencil preference, then larger clearance.
std::vector<MixedScheme> rank_schemes(std::vector<MixedScheme> available);

/// Best available scheme of the given kind, if any (input already ranked).
std::optional<MixedScheme> best_of_kind(const std::vector<MixedScheme>& ranked, MixedKind kind);

}  // namespace ccim
