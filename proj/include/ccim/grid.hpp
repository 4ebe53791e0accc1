#pragma once

// Uniform Cartesian grid over [-1,1]^3, nodal sign field, point classification and
// interface/segment intersections.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccim/surface.hpp"

namespace ccim {

using Index3 = std::array<int, 3>;

enum class Side : int { Minus = -1, Plus = 1 };

inline Side opposite(Side s) { return s == Side::Minus ? Side::Plus : Side::Minus; }
/// +1 for Omega^-, -1 for Omega^+: multiplies a bracket [v] = v+ - v- into
/// (far side) - (own side).
inline double toward_other(Side own) { return own == Side::Minus ? 1.0 : -1.0; }

class Grid {
 public:
  /// Throws ConfigError for n < 2.
  explicit Grid(int n);

  int n() const { return n_; }
  double h() const { return h_; }
  int points_per_axis() const { return n_ + 1; }
  std::int64_t size() const {
    const std::int64_t m = n_ + 1;
    return m * m * m;
  }

  std::int64_t linear(const Index3& i) const {
    const std::int64_t m = n_ + 1;
    return (static_cast<std::int64_t>(i[0]) * m + i[1]) * m + i[2];
  }
  Index3 multi(std::int64_t idx) const {
    const std::int64_t m = n_ + 1;
    return {static_cast<int>(idx / (m * m)), static_cast<int>((idx / m) % m), static_cast<int>(idx % m)};
  }
  double coordinate(int i) const { return -1.0 + i * h_; }
  Vec3 point(const Index3& i) const { return {coordinate(i[0]), coordinate(i[1]), coordinate(i[2])}; }
  bool in_bounds(const Index3& i) const {
    for (int k = 0; k < 3; ++k)
      if (i[k] < 0 || i[k] > n_) return false;
    return true;
  }
  bool on_boundary(const Index3& i) const {
    for (int k = 0; k < 3; ++k)
      if (i[k] == 0 || i[k] == n_) return true;
    return false;
  }

 private:
  int n_;
  double h_;
};

inline Index3 operator+(const Index3& a, const Index3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Index3 axis_offset(int k, int s) {
  Index3 o{0, 0, 0};
  o[k] = s;
  return o;
}

/// Nodal level-set values after degeneracy perturbation, and the induced sides.
class SignField {
 public:
  /// Samples `surface` at every node.
  SignField(const Grid& grid, const Surface& surface);
  /// Uses given nodal values (e.g. an evolving level set).
  SignField(const Grid& grid, std::vector<double> nodal_phi);

  const Grid& grid() const { return grid_; }
  double phi(const Index3& i) const { return phi_[grid_.linear(i)]; }
  double phi(std::int64_t idx) const { return phi_[idx]; }
  Side side(const Index3& i) const { return phi_[grid_.linear(i)] < 0.0 ? Side::Minus : Side::Plus; }
  Side side(std::int64_t idx) const { return phi_[idx] < 0.0 ? Side::Minus : Side::Plus; }
  const std::vector<double>& values() const { return phi_; }

 private:
  void perturb();
  Grid grid_;
  std::vector<double> phi_;
};

enum class PointKind { Interior, Interface };

/// Throws Error for indices on or outside the boundary.
PointKind classify_point(const SignField& signs, const Index3& i);

struct Intersection {
  Index3 base{};
  int axis = 0;
  int direction = 1;
  /// Distance from the base point to the crossing, in units of h.
  double alpha = 0.5;
  double beta = 0.5;
  Vec3 location{};
  SurfaceGeometry geometry{};
};

/// Bisection on the segment from i toward i + direction*e_axis; none when the
/// perturbed nodal signs agree.
std::optional<Intersection> find_intersection(const SignField& signs, const Surface& surface, const Index3& i,
                                              int axis, int direction);

inline constexpr double kAlphaClamp = 1e-8;
inline constexpr int kBisectionIterations = 60;

/// Samples 8 interior points of the segment and reports whether phi changes sign
/// more than once (violating the one-crossing assumption).
bool has_multiple_crossings(const SignField& signs, const Surface& surface, const Index3& i, int axis, int direction);

}  // namespace ccim
