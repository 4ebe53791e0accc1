#pragma once

// Small dense matrices (at most 6x6) with partial-pivoting LU.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace ccim {

inline constexpr int kMaxDense = 6;

class SmallMatrix {
 public:
  SmallMatrix() = default;
  explicit SmallMatrix(int n) : n_(n) {}

  static SmallMatrix identity(int n) {
    SmallMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[i * kMaxDense + j]; }
  double operator()(int i, int j) const { return a_[i * kMaxDense + j]; }

  /// Maximum absolute column sum.
  double norm1() const {
    double best = 0.0;
    for (int j = 0; j < n_; ++j) {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) s += std::fabs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }

 private:
  int n_ = 0;
  std::array<double, kMaxDense * kMaxDense> a_{};
};

/// LU factors with row permutation: P A = L U, L unit lower.
class SmallLu {
 public:
  /// Returns nullopt on an exactly zero pivot.
  static std::optional<SmallLu> factor(const SmallMatrix& a);

  int size() const { return lu_.size(); }
  double determinant() const;
  /// Solves A x = b in place over a strided "vector" of generic elements:
  /// calls the callbacks so the same elimination can run over affine forms.
  template <class Vec, class Axpy, class Scale>
  void solve_in_place(std::array<Vec, kMaxDense>& b, Axpy axpy, Scale scale) const;

  std::array<double, kMaxDense> solve(std::array<double, kMaxDense> b) const {
    solve_in_place(
        b, [](double& y, double c, const double& x) { y += c * x; }, [](double& y, double c) { y *= c; });
    return b;
  }

  SmallMatrix inverse() const;

 private:
  SmallMatrix lu_;
  std::array<int, kMaxDense> perm_{};
  int swaps_ = 0;
};

inline std::optional<SmallLu> SmallLu::factor(const SmallMatrix& a) {
  SmallLu f;
  f.lu_ = a;
  const int n = a.size();
  for (int i = 0; i < n; ++i) f.perm_[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(f.lu_(i, k)) > std::fabs(f.lu_(piv, k))) piv = i;
    if (f.lu_(piv, k) == 0.0) return std::nullopt;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu_(k, j), f.lu_(piv, j));
      std::swap(f.perm_[k], f.perm_[piv]);
      ++f.swaps_;
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = f.lu_(i, k) / f.lu_(k, k);
      f.lu_(i, k) = m;
      for (int j = k + 1; j < n; ++j) f.lu_(i, j) -= m * f.lu_(k, j);
    }
  }
  return f;
}

inline double SmallLu::determinant() const {
  double d = swaps_ % 2 == 0 ? 1.0 : -1.0;
  for (int i = 0; i < lu_.size(); ++i) d *= lu_(i, i);
  return d;
}

template <class Vec, class Axpy, class Scale>
void SmallLu::solve_in_place(std::array<Vec, kMaxDense>& b, Axpy axpy, Scale scale) const {
  const int n = lu_.size();
  std::array<Vec, kMaxDense> y;
  for (int i = 0; i < n; ++i) y[i] = b[perm_[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (lu_(i, j) != 0.0) axpy(y[i], -lu_(i, j), y[j]);
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j)
      if (lu_(i, j) != 0.0) axpy(y[i], -lu_(i, j), y[j]);
    scale(y[i], 1.0 / lu_(i, i));
  }
  for (int i = 0; i < n; ++i) b[i] = y[i];
}

inline SmallMatrix SmallLu::inverse() const {
  const int n = lu_.size();
  SmallMatrix inv(n);
  for (int j = 0; j < n; ++j) {
    std::array<double, kMaxDense> e{};
    e[j] = 1.0;
    const auto col = solve(e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

/// Exact 1-norm condition number via the explicit inverse; +inf when singular.
inline double condition_number_1(const SmallMatrix& a) {
  const auto lu = SmallLu::factor(a);
  if (!lu) return std::numeric_limits<double>::infinity();
  const double c = a.norm1() * lu->inverse().norm1();
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

}  // namespace ccim
