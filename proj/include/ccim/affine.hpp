#pragma once

// Linear functionals over the local unknowns of one grid point.
//
// Symbols: u-values at offsets j with |j|_inf <= 2, first derivatives u_k,
// principal second derivatives u_kk, jumps of mixed derivatives [u_kl], and a
// constant slot. Forms are dense over this fixed basis so that every elimination
// step is one contiguous axpy.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccim/dense.hpp"
#include "ccim/grid.hpp"

namespace ccim {

inline constexpr int kStencilRadius = 2;
inline constexpr int kStencilWidth = 2 * kStencilRadius + 1;
inline constexpr int kGridSymbols = kStencilWidth * kStencilWidth * kStencilWidth;

using Symbol = int;

namespace symbol {

inline constexpr Symbol kFirstBase = kGridSymbols;
inline constexpr Symbol kSecondBase = kFirstBase + 3;
inline constexpr Symbol kMixedJumpBase = kSecondBase + 3;
inline constexpr Symbol kConstant = kMixedJumpBase + 3;
inline constexpr int kCount = kConstant + 1;
/// Storage length, rounded up to a multiple of 4 doubles.
inline constexpr int kPadded = (kCount + 3) / 4 * 4;

/// Throws Error if the offset lies outside the radius-2 box.
Symbol grid_value(const Index3& offset);
inline constexpr Symbol first_derivative(int k) { return kFirstBase + k; }
inline constexpr Symbol pure_second(int k) { return kSecondBase + k; }
/// Pair index for k < l: (0,1) -> 0, (0,2) -> 1, (1,2) -> 2.
inline constexpr int pair_index(int k, int l) { return k + l - 1; }
inline constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
inline constexpr Symbol mixed_jump(int k, int l) { return kMixedJumpBase + pair_index(k < l ? k : l, k < l ? l : k); }

inline constexpr bool is_grid_value(Symbol s) { return s >= 0 && s < kGridSymbols; }
inline constexpr bool is_first(Symbol s) { return s >= kFirstBase && s < kSecondBase; }
inline constexpr bool is_second(Symbol s) { return s >= kSecondBase && s < kMixedJumpBase; }
inline constexpr bool is_mixed_jump(Symbol s) { return s >= kMixedJumpBase && s < kConstant; }
Index3 offset_of(Symbol s);
std::string describe(Symbol s);

}  // namespace symbol

class AffineForm {
 public:
  AffineForm() { c_.fill(0.0); }

  static AffineForm constant(double value) {
    AffineForm f;
    f.c_[symbol::kConstant] = value;
    return f;
  }
  static AffineForm of(Symbol s, double coefficient = 1.0) {
    AffineForm f;
    f.c_[s] = coefficient;
    return f;
  }

  double operator[](Symbol s) const { return c_[s]; }
  double& operator[](Symbol s) { return c_[s]; }
  double constant_term() const { return c_[symbol::kConstant]; }

  AffineForm& operator+=(const AffineForm& o);
  AffineForm& operator-=(const AffineForm& o);
  AffineForm& operator*=(double s);
  /// this += a * o
  AffineForm& add_scaled(double a, const AffineForm& o);

  friend AffineForm operator+(AffineForm a, const AffineForm& b) { return a += b; }
  friend AffineForm operator-(AffineForm a, const AffineForm& b) { return a -= b; }
  friend AffineForm operator*(double s, AffineForm a) { return a *= s; }

  /// Value under an assignment of every non-constant symbol (size symbol::kCount,
  /// constant slot ignored).
  double evaluate(std::span<const double> assignment) const;

  /// Drops coefficients below rel * max |c| over non-constant symbols.
  void prune(double rel = 1e-14);

  bool has_any(bool (*predicate)(Symbol)) const;
  double max_abs() const;

  std::span<const double> coefficients() const { return {c_.data(), static_cast<std::size_t>(symbol::kCount)}; }

 private:
  alignas(32) std::array<double, symbol::kPadded> c_;
};

/// Replaces `s` in target by `replacement`. Throws Error when the replacement
/// itself depends on `s`.
AffineForm substitute(const AffineForm& target, Symbol s, const AffineForm& replacement);

/// Solves A X = rhs coefficient-wise for m <= 6 forms. Throws SingularSystem when
/// A is singular or its 1-norm condition number exceeds 1e12; `context` is added
/// to the message.
std::vector<AffineForm> solve_linear_forms(const SmallMatrix& a, std::span<const AffineForm> rhs,
                                           const std::string& context = {});

inline constexpr double kMaxFormSystemCondition = 1e12;

}  // namespace ccim
