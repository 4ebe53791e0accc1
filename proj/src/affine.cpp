#include "ccim/affine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccim/error.hpp"
#include "ccim/simd.hpp"

namespace ccim {

namespace symbol {

Symbol grid_value(const Index3& offset) {
  for (int k = 0; k < 3; ++k)
    if (offset[k] < -kStencilRadius || offset[k] > kStencilRadius)
      throw Error("stencil offset outside radius " + std::to_string(kStencilRadius));
  return ((offset[0] + kStencilRadius) * kStencilWidth + (offset[1] + kStencilRadius)) * kStencilWidth +
         (offset[2] + kStencilRadius);
}

Index3 offset_of(Symbol s) {
  return {s / (kStencilWidth * kStencilWidth) - kStencilRadius, (s / kStencilWidth) % kStencilWidth - kStencilRadius,
          s % kStencilWidth - kStencilRadius};
}

std::string describe(Symbol s) {
  std::ostringstream out;
  if (is_grid_value(s)) {
    const Index3 o = offset_of(s);
    out << "u(" << o[0] << "," << o[1] << "," << o[2] << ")";
  } else if (is_first(s)) {
    out << "u_" << (s - kFirstBase);
  } else if (is_second(s)) {
    const int k = s - kSecondBase;
    out << "u_" << k << k;
  } else if (is_mixed_jump(s)) {
    const auto& p = kPairs[s - kMixedJumpBase];
    out << "[u_" << p[0] << p[1] << "]";
  } else {
    out << "1";
  }
  return out.str();
}

}  // namespace symbol

AffineForm& AffineForm::operator+=(const AffineForm& o) { return add_scaled(1.0, o); }
AffineForm& AffineForm::operator-=(const AffineForm& o) { return add_scaled(-1.0, o); }

AffineForm& AffineForm::operator*=(double s) {
  simd::active().scale(s, c_.data(), c_.size());
  return *this;
}

AffineForm& AffineForm::add_scaled(double a, const AffineForm& o) {
  simd::active().axpy(a, o.c_.data(), c_.data(), c_.size());
  return *this;
}

double AffineForm::evaluate(std::span<const double> assignment) const {
  double v = c_[symbol::kConstant];
  for (Symbol s = 0; s < symbol::kConstant; ++s)
    if (c_[s] != 0.0) v += c_[s] * assignment[s];
  return v;
}

void AffineForm::prune(double rel) {
  double m = 0.0;
  for (Symbol s = 0; s < symbol::kConstant; ++s) m = std::max(m, std::fabs(c_[s]));
  const double cut = rel * m;
  for (Symbol s = 0; s < symbol::kConstant; ++s)
    if (std::fabs(c_[s]) < cut) c_[s] = 0.0;
}

bool AffineForm::has_any(bool (*predicate)(Symbol)) const {
  for (Symbol s = 0; s < symbol::kCount; ++s)
    if (predicate(s) && c_[s] != 0.0) return true;
  return false;
}

double AffineForm::max_abs() const { return simd::active().max_abs(c_.data(), c_.size()); }

AffineForm substitute(const AffineForm& target, Symbol s, const AffineForm& replacement) {
  if (replacement[s] != 0.0) throw Error("self-referential substitution of " + symbol::describe(s));
  AffineForm out = target;
  const double c = out[s];
  if (c == 0.0) return out;
  out[s] = 0.0;
  out.add_scaled(c, replacement);
  return out;
}

std::vector<AffineForm> solve_linear_forms(const SmallMatrix& a, std::span<const AffineForm> rhs,
                                           const std::string& context) {
  const int m = a.size();
  if (static_cast<int>(rhs.size()) != m) throw Error("solve_linear_forms: size mismatch");
  const auto lu = SmallLu::factor(a);
  const double cond = lu ? a.norm1() * lu->inverse().norm1() : std::numeric_limits<double>::infinity();
  if (!lu || !(cond <= kMaxFormSystemCondition)) {
    std::ostringstream msg;
    msg << "singular local system (1-norm condition " << cond << ")";
    if (!context.empty()) msg << " at " << context;
    throw SingularSystem(msg.str());
  }
  std::array<AffineForm, kMaxDense> work;
  for (int i = 0; i < m; ++i) work[i] = rhs[i];
  lu->solve_in_place(
      work, [](AffineForm& y, double c, const AffineForm& x) { y.add_scaled(c, x); },
      [](AffineForm& y, double c) { y *= c; });
  return {work.begin(), work.begin() + m};
}

}  // namespace ccim
