#include "ccim/surface.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "ccim/error.hpp"

namespace ccim {

std::array<Vec3, 2> tangent_frame(const Vec3& normal) {
  // Two axes with smallest |n . e_k|; the dropped axis is the most aligned one.
  int drop = 0;
  for (int k = 1; k < 3; ++k)
    if (std::fabs(normal[k]) > std::fabs(normal[drop])) drop = k;
  std::array<Vec3, 2> frame{};
  int slot = 0;
  for (int k = 0; k < 3; ++k) {
    if (k == drop) continue;
    Vec3 t = unit(k) - normal[k] * normal;
    for (int j = 0; j < slot; ++j) t = t - dot(t, frame[j]) * frame[j];
    frame[slot++] = (1.0 / norm(t)) * t;
  }
  return frame;
}

SurfaceGeometry geometry_at(const Surface& surface, const Vec3& x) {
  const Vec3 g = surface.gradient(x);
  const double gn = norm(g);
  if (!(gn > 1e-8)) throw Error("vanishing level-set gradient at (" + std::to_string(x[0]) + ", " +
                                std::to_string(x[1]) + ", " + std::to_string(x[2]) + ")");
  SurfaceGeometry geom;
  geom.normal = (1.0 / gn) * g;
  geom.tangents = tangent_frame(geom.normal);
  const Mat3 proj = identity_mat3() + (-1.0) * outer(geom.normal, geom.normal);
  geom.normal_jacobian = (1.0 / gn) * mul(proj, surface.hessian(x));
  return geom;
}

Vec3 finite_difference_gradient(const Surface& surface, const Vec3& x, double step) {
  Vec3 g{};
  for (int k = 0; k < 3; ++k) {
    const Vec3 d = step * unit(k);
    g[k] = (surface.phi(x + d) - surface.phi(x - d)) / (2.0 * step);
  }
  return g;
}

Mat3 finite_difference_hessian(const Surface& surface, const Vec3& x, double step) {
  Mat3 hess{};
  for (int k = 0; k < 3; ++k) {
    const Vec3 d = step * unit(k);
    const Vec3 gp = surface.gradient(x + d);
    const Vec3 gm = surface.gradient(x - d);
    for (int j = 0; j < 3; ++j) hess[j][k] = (gp[j] - gm[j]) / (2.0 * step);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) hess[i][j] = hess[j][i] = 0.5 * (hess[i][j] + hess[j][i]);
  return hess;
}

namespace {

Mat3 radial_hessian(const Vec3& d, double r) {
  // Hessian of |d|: (I - d d^T / r^2) / r
  Mat3 h = identity_mat3() + (-1.0 / (r * r)) * outer(d, d);
  return (1.0 / r) * h;
}

class Sphere final : public Surface {
 public:
  Sphere(double radius, const Vec3& center) : radius_(radius), center_(center) {}
  double phi(const Vec3& x) const override { return norm(x - center_) - radius_; }
  Vec3 gradient(const Vec3& x) const override {
    const Vec3 d = x - center_;
    return (1.0 / norm(d)) * d;
  }
  Mat3 hessian(const Vec3& x) const override {
    const Vec3 d = x - center_;
    return radial_hessian(d, norm(d));
  }
  std::string name() const override { return "sphere:" + std::to_string(radius_); }

 private:
  double radius_;
  Vec3 center_;
};

class Plane final : public Surface {
 public:
  Plane(const Vec3& normal, double offset) : normal_((1.0 / norm(normal)) * normal), offset_(offset) {}
  double phi(const Vec3& x) const override { return dot(x, normal_) - offset_; }
  Vec3 gradient(const Vec3&) const override { return normal_; }
  Mat3 hessian(const Vec3&) const override { return zero_mat3(); }
  std::string name() const override { return "plane"; }

 private:
  Vec3 normal_;
  double offset_;
};

class Ellipsoid final : public Surface {
 public:
  double phi(const Vec3& x) const override { return 2 * x[0] * x[0] + 3 * x[1] * x[1] + 6 * x[2] * x[2] - 1.3; }
  Vec3 gradient(const Vec3& x) const override { return {4 * x[0], 6 * x[1], 12 * x[2]}; }
  Mat3 hessian(const Vec3&) const override { return Mat3{{{4, 0, 0}, {0, 6, 0}, {0, 0, 12}}}; }
  std::string name() const override { return "ellipsoid"; }
};

class EightBalls final : public Surface {
 public:
  EightBalls() {
    for (int k = 0; k < 8; ++k) {
      centers_[k] = {((k / 4) % 2 == 0 ? 0.5 : -0.5), ((k / 2) % 2 == 0 ? 0.5 : -0.5), (k % 2 == 0 ? 0.5 : -0.5)};
    }
  }
  double phi(const Vec3& x) const override { return norm(x - centers_[nearest(x).first]) - kRadius; }
  Vec3 gradient(const Vec3& x) const override {
    const Vec3 d = x - centers_[nearest(x).first];
    return (1.0 / norm(d)) * d;
  }
  Mat3 hessian(const Vec3& x) const override {
    const auto [k, ambiguous] = nearest(x);
    if (ambiguous) return finite_difference_hessian(*this, x);
    const Vec3 d = x - centers_[k];
    return radial_hessian(d, norm(d));
  }
  std::string name() const override { return "eight_balls"; }

 private:
  static constexpr double kRadius = 0.3;

  /// Index of the closest center and whether the runner-up ties within 1e-9.
  std::pair<int, bool> nearest(const Vec3& x) const {
    int best = 0;
    double d0 = norm(x - centers_[0]);
    double d1 = 1e300;
    for (int k = 1; k < 8; ++k) {
      const double d = norm(x - centers_[k]);
      if (d < d0) {
        d1 = d0;
        d0 = d;
        best = k;
      } else if (d < d1) {
        d1 = d;
      }
    }
    return {best, d1 - d0 < 1e-9};
  }

  std::array<Vec3, 8> centers_{};
};

// r - 0.5 - 0.2 sin(2 theta) sin(psi) with theta the polar angle from +z and psi the
// azimuth, which reduces to r - 0.5 - 0.4 y z / r^2.
class Peanut final : public Surface {
 public:
  double phi(const Vec3& x) const override {
    const double r2 = dot(x, x);
    // yz / r^2 is bounded but undefined at the origin; any value in [-0.7, -0.3] keeps the sign.
    if (r2 == 0.0) return -0.5;
    return std::sqrt(r2) - 0.5 - 0.4 * x[1] * x[2] / r2;
  }
  Vec3 gradient(const Vec3& x) const override {
    const double r2 = dot(x, x);
    const double r = std::sqrt(r2);
    const double p = x[1] * x[2];
    const Vec3 grad_p{0.0, x[2], x[1]};
    Vec3 g{};
    for (int i = 0; i < 3; ++i) g[i] = x[i] / r - 0.4 * (grad_p[i] / r2 - 2.0 * p * x[i] / (r2 * r2));
    return g;
  }
  Mat3 hessian(const Vec3& x) const override {
    const double r2 = dot(x, x);
    const double r = std::sqrt(r2);
    const double p = x[1] * x[2];
    const Vec3 grad_p{0.0, x[2], x[1]};
    const double w = 1.0 / r2;
    const Vec3 grad_w = (-2.0 / (r2 * r2)) * x;
    Mat3 hess_w = (-2.0 / (r2 * r2)) * identity_mat3() + (8.0 / (r2 * r2 * r2)) * outer(x, x);
    Mat3 hess_p{};
    hess_p[1][2] = hess_p[2][1] = 1.0;
    const Mat3 hess_q = w * hess_p + outer(grad_p, grad_w) + outer(grad_w, grad_p) + p * hess_w;
    return radial_hessian(x, r) + (-0.4) * hess_q;
  }
  std::string name() const override { return "peanut"; }
};

class Donut final : public Surface {
 public:
  double phi(const Vec3& x) const override {
    const double q = std::hypot(x[0], x[1]) - 0.6;
    return q * q + x[2] * x[2] - 0.16;
  }
  Vec3 gradient(const Vec3& x) const override {
    const double rho = std::hypot(x[0], x[1]);
    const double q = rho - 0.6;
    return {2 * q * x[0] / rho, 2 * q * x[1] / rho, 2 * x[2]};
  }
  Mat3 hessian(const Vec3& x) const override {
    const double rho = std::hypot(x[0], x[1]);
    const double q = rho - 0.6;
    const Vec3 gq{x[0] / rho, x[1] / rho, 0.0};
    Mat3 hq{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) hq[i][j] = ((i == j ? 1.0 : 0.0) - gq[i] * gq[j]) / rho;
    Mat3 h = 2.0 * outer(gq, gq) + (2.0 * q) * hq;
    h[2][2] += 2.0;
    return h;
  }
  std::string name() const override { return "donut"; }
};

class Banana final : public Surface {
 public:
  double phi(const Vec3& p) const override {
    const double X = 7 * p[0] + 6, y = p[1], z = p[2];
    const double X2 = X * X, y2 = y * y, z2 = z * z;
    return X2 * X2 + 2401 * y2 * y2 + 3601.5 * z2 * z2 + 98 * X2 * (y2 + z2) + 4802 * y2 * z2 - 94 * X2 + 3822 * y2 -
           4606 * z2 + 1521;
  }
  Vec3 gradient(const Vec3& p) const override {
    const double X = 7 * p[0] + 6, y = p[1], z = p[2];
    const double X2 = X * X, y2 = y * y, z2 = z * z;
    return {7 * (4 * X2 * X + 196 * X * (y2 + z2) - 188 * X), 9604 * y2 * y + 196 * X2 * y + 9604 * y * z2 + 7644 * y,
            14406 * z2 * z + 196 * X2 * z + 9604 * y2 * z - 9212 * z};
  }
  Mat3 hessian(const Vec3& p) const override {
    const double X = 7 * p[0] + 6, y = p[1], z = p[2];
    const double X2 = X * X, y2 = y * y, z2 = z * z;
    Mat3 h{};
    h[0][0] = 49 * (12 * X2 + 196 * (y2 + z2) - 188);
    h[0][1] = h[1][0] = 7 * 392 * X * y;
    h[0][2] = h[2][0] = 7 * 392 * X * z;
    h[1][1] = 28812 * y2 + 196 * X2 + 9604 * z2 + 7644;
    h[1][2] = h[2][1] = 19208 * y * z;
    h[2][2] = 43218 * z2 + 196 * X2 + 9604 * y2 - 9212;
    return h;
  }
  std::string name() const override { return "banana"; }
};

class Popcorn final : public Surface {
 public:
  explicit Popcorn(const PopcornParams& params) : params_(params) {
    const double r0 = params.r0;
    for (int k = 0; k < 10; ++k) {
      const double band = std::floor(k / 5.0);
      const double angle = 2.0 * k * std::numbers::pi / 5.0 - band * std::numbers::pi;
      centers_[k] = {r0 / std::sqrt(5.0) * 2.0 * std::cos(angle), r0 / std::sqrt(5.0) * 2.0 * std::sin(angle),
                     r0 / std::sqrt(5.0) * (band == 0.0 ? 1.0 : -1.0)};
    }
    centers_[10] = {0.0, 0.0, r0};
    centers_[11] = {0.0, 0.0, -r0};
  }
  double phi(const Vec3& x) const override {
    double s = norm(x) - params_.r0;
    for (const auto& c : centers_) s -= amplitude() * std::exp(-params_.decay * dot(x - c, x - c));
    return s;
  }
  Vec3 gradient(const Vec3& x) const override {
    Vec3 g = (1.0 / norm(x)) * x;
    for (const auto& c : centers_) {
      const Vec3 d = x - c;
      g = g + (2.0 * params_.decay * amplitude() * std::exp(-params_.decay * dot(d, d))) * d;
    }
    return g;
  }
  Mat3 hessian(const Vec3& x) const override {
    Mat3 h = radial_hessian(x, norm(x));
    const double b = params_.decay;
    for (const auto& c : centers_) {
      const Vec3 d = x - c;
      const double e = amplitude() * std::exp(-b * dot(d, d));
      h = h + (2.0 * b * e) * identity_mat3() + (-4.0 * b * b * e) * outer(d, d);
    }
    return h;
  }
  std::string name() const override { return "popcorn"; }

 private:
  double amplitude() const { return params_.r0 / params_.amplitude_divisor; }
  PopcornParams params_;
  std::array<Vec3, 12> centers_{};
};

}  // namespace

SurfacePtr make_sphere(double radius, const Vec3& center) { return std::make_shared<Sphere>(radius, center); }
SurfacePtr make_plane(const Vec3& normal, double offset) { return std::make_shared<Plane>(normal, offset); }
SurfacePtr make_ellipsoid() { return std::make_shared<Ellipsoid>(); }
SurfacePtr make_eight_balls() { return std::make_shared<EightBalls>(); }
SurfacePtr make_peanut() { return std::make_shared<Peanut>(); }
SurfacePtr make_donut() { return std::make_shared<Donut>(); }
SurfacePtr make_banana() { return std::make_shared<Banana>(); }
SurfacePtr make_popcorn(const PopcornParams& params) { return std::make_shared<Popcorn>(params); }

std::vector<std::string> catalog_names() {
  return {"eight_balls", "ellipsoid", "peanut", "donut", "banana", "popcorn", "sphere"};
}

SurfacePtr catalog_surface(std::string_view name) {
  if (name == "eight_balls") return make_eight_balls();
  if (name == "ellipsoid") return make_ellipsoid();
  if (name == "peanut") return make_peanut();
  if (name == "donut") return make_donut();
  if (name == "banana") return make_banana();
  if (name == "popcorn") return make_popcorn();
  if (name == "sphere") return make_sphere(0.5);
  if (name.starts_with("sphere:")) {
    const std::string_view arg = name.substr(7);
    double r = 0.0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), r);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || !(r > 0.0))
      throw ConfigError("bad sphere radius in surface name '" + std::string(name) + "'");
    return make_sphere(r);
  }
  throw ConfigError("unknown surface '" + std::string(name) + "'");
}

}  // namespace ccim
