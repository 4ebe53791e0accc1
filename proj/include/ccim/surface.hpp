#pragma once

// Level-set surfaces and their differential geometry.
//
// A Surface is an implicit function phi with analytic (or interpolated) gradient and
// Hessian. Omega^- = {phi < 0} is the inside region, Omega^+ = {phi > 0} the outside.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ccim/vec.hpp"

namespace ccim {

class Surface {
 public:
  virtual ~Surface() = default;
  virtual double phi(const Vec3& x) const = 0;
  virtual Vec3 gradient(const Vec3& x) const = 0;
  virtual Mat3 hessian(const Vec3& x) const = 0;
  virtual std::string name() const = 0;
};

using SurfacePtr = std::shared_ptr<const Surface>;

/// Unit normal, tangent frame and normal Jacobian at a point near the interface.
struct SurfaceGeometry {
  Vec3 normal{};
  std::array<Vec3, 2> tangents{};
  /// (I - n n^T) Hess(phi) / |grad phi|; annihilates n from the left.
  Mat3 normal_jacobian{};
};

/// Builds the frame from the two coordinate axes least aligned with n (ties go to the
/// lower axis), projected onto the tangent plane and orthonormalized in axis order.
/// Throws Error when |grad phi| <= 1e-8.
SurfaceGeometry geometry_at(const Surface& surface, const Vec3& x);

/// The frame construction on its own, for callers that already hold n.
std::array<Vec3, 2> tangent_frame(const Vec3& normal);

// Catalog --------------------------------------------------------------------

struct PopcornParams {
  double r0 = 0.6;
  /// Bump amplitude is r0 / amplitude_divisor.
  double amplitude_divisor = 25.0;
  double decay = 45.0;
};

SurfacePtr make_sphere(double radius, const Vec3& center = {0.0, 0.0, 0.0});
/// phi = (x - offset) . normal with normal a unit vector.
SurfacePtr make_plane(const Vec3& normal, double offset);
SurfacePtr make_ellipsoid();
SurfacePtr make_eight_balls();
SurfacePtr make_peanut();
SurfacePtr make_donut();
SurfacePtr make_banana();
SurfacePtr make_popcorn(const PopcornParams& params = {});

/// Names accepted: eight_balls, ellipsoid, peanut, donut, banana, popcorn, sphere,
/// sphere:<r>. Throws ConfigError for anything else.
SurfacePtr catalog_surface(std::string_view name);
std::vector<std::string> catalog_names();

/// Central-difference Hessian of phi with step `step` (used where an analytic
/// branch is ambiguous, and by tests).
Mat3 finite_difference_hessian(const Surface& surface, const Vec3& x, double step = 1e-4);
Vec3 finite_difference_gradient(const Surface& surface, const Vec3& x, double step = 1e-6);

}  // namespace ccim
