#include "ccim/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include "ccim/error.hpp"

namespace ccim {

// Tricubic interpolation -------------------------------------------------------

namespace {

/// Lagrange basis on nodes 0..3 and its first two derivatives at s.
void lagrange4(double s, std::array<double, 4>& w, std::array<double, 4>& dw, std::array<double, 4>& ddw) {
  for (int j = 0; j < 4; ++j) {
    double den = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != j) den *= j - m;
    double v = 1.0, d = 0.0, dd = 0.0;
    // Product rule over the three linear factors (s - m).
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      const double f = s - m;
      dd = dd * f + 2.0 * d;
      d = d * f + v;
      v = v * f;
    }
    w[j] = v / den;
    dw[j] = d / den;
    ddw[j] = dd / den;
  }
}

}  // namespace

GridLevelSet::GridLevelSet(const Grid& grid, std::vector<double> phi) : grid_(grid), phi_(std::move(phi)) {
  if (static_cast<std::int64_t>(phi_.size()) != grid.size()) throw Error("level set size does not match grid");
  if (grid.n() < 3) throw ConfigError("tricubic level set needs N >= 3");
}

GridLevelSet::Stencil GridLevelSet::stencil(const Vec3& x) const {
  Stencil st;
  const double h = grid_.h();
  for (int k = 0; k < 3; ++k) {
    const double t = (x[k] + 1.0) / h;
    const int base = std::clamp(static_cast<int>(std::floor(t)) - 1, 0, grid_.n() - 3);
    st.first[k] = base;
    lagrange4(t - base, st.w[k], st.dw[k], st.ddw[k]);
    for (int j = 0; j < 4; ++j) {
      st.dw[k][j] /= h;
      st.ddw[k][j] /= h * h;
    }
  }
  return st;
}

double GridLevelSet::phi(const Vec3& x) const {
  const Stencil st = stencil(x);
  double v = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double wab = st.w[0][a] * st.w[1][b];
      for (int c = 0; c < 4; ++c) v += wab * st.w[2][c] * node(st.first[0] + a, st.first[1] + b, st.first[2] + c);
    }
  return v;
}

Vec3 GridLevelSet::gradient(const Vec3& x) const {
  const Stencil st = stencil(x);
  Vec3 g{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const double p = node(st.first[0] + a, st.first[1] + b, st.first[2] + c);
        g[0] += st.dw[0][a] * st.w[1][b] * st.w[2][c] * p;
        g[1] += st.w[0][a] * st.dw[1][b] * st.w[2][c] * p;
        g[2] += st.w[0][a] * st.w[1][b] * st.dw[2][c] * p;
      }
  return g;
}

Mat3 GridLevelSet::hessian(const Vec3& x) const {
  const Stencil st = stencil(x);
  Mat3 m{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const double p = node(st.first[0] + a, st.first[1] + b, st.first[2] + c);
        const std::array<double, 3> w{st.w[0][a], st.w[1][b], st.w[2][c]};
        const std::array<double, 3> dw{st.dw[0][a], st.dw[1][b], st.dw[2][c]};
        const std::array<double, 3> ddw{st.ddw[0][a], st.ddw[1][b], st.ddw[2][c]};
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) {
            double prod = 1.0;
            for (int q = 0; q < 3; ++q) {
              if (i == j)
                prod *= q == i ? ddw[q] : w[q];
              else
                prod *= (q == i || q == j) ? dw[q] : w[q];
            }
            m[i][j] += prod * p;
          }
      }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) m[i][j] = m[j][i];
  return m;
}

// Velocity extension --------------------------------------------------------------

std::vector<double> extend_velocity(const Grid& grid, const std::vector<double>& phi,
                                    const std::vector<InterfaceSpeed>& speeds) {
  if (speeds.empty()) throw Error("velocity extension: no interface crossings");
  const std::int64_t n = grid.size();
  const double h = grid.h();
  std::vector<double> num(n, 0.0), den(n, 0.0);
  for (const auto& s : speeds) {
    const Index3 a = s.hit.base;
    const Index3 b = a + axis_offset(s.hit.axis, s.hit.direction);
    const double da = std::max(s.hit.alpha * h, 1e-12 * h), db = std::max(s.hit.beta * h, 1e-12 * h);
    num[grid.linear(a)] += s.speed / da;
    den[grid.linear(a)] += 1.0 / da;
    num[grid.linear(b)] += s.speed / db;
    den[grid.linear(b)] += 1.0 / db;
  }
  std::vector<double> v(n, 0.0);
  std::vector<char> known(n, 0);
  for (std::int64_t i = 0; i < n; ++i)
    if (den[i] > 0.0) {
      v[i] = num[i] / den[i];
      known[i] = 1;
    }

  std::vector<std::int64_t> order;
  order.reserve(n);
  for (std::int64_t i = 0; i < n; ++i)
    if (!known[i]) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) { return std::fabs(phi[a]) < std::fabs(phi[b]); });

  std::vector<std::int64_t> deferred;
  auto fill = [&](std::int64_t idx) {
    const Index3 i = grid.multi(idx);
    const double pi = std::fabs(phi[idx]);
    double wsum = 0.0, vsum = 0.0, any_sum = 0.0;
    int any = 0;
    for (int k = 0; k < 3; ++k) {
      std::int64_t pick = -1;
      for (int s : {-1, 1}) {
        const Index3 j = i + axis_offset(k, s);
        if (!grid.in_bounds(j)) continue;
        const std::int64_t jdx = grid.linear(j);
        if (!known[jdx]) continue;
        any_sum += v[jdx];
        ++any;
        if (std::fabs(phi[jdx]) > pi) continue;
        if (pick < 0 || std::fabs(phi[jdx]) < std::fabs(phi[pick])) pick = jdx;
      }
      if (pick < 0) continue;
      const double w = pi - std::fabs(phi[pick]);
      wsum += w;
      vsum += w * v[pick];
    }
    if (wsum > 0.0) {
      v[idx] = vsum / wsum;
    } else if (any > 0) {
      v[idx] = any_sum / any;
    } else {
      return false;
    }
    known[idx] = 1;
    return true;
  };
  for (std::int64_t idx : order)
    if (!fill(idx)) deferred.push_back(idx);
  while (!deferred.empty()) {
    std::vector<std::int64_t> next;
    for (std::int64_t idx : deferred)
      if (!fill(idx)) next.push_back(idx);
    if (next.size() == deferred.size()) throw Error("velocity extension: disconnected nodes");
    deferred.swap(next);
  }
  return v;
}

// Godunov step ----------------------------------------------------------------------

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::fabs(a) < std::fabs(b) ? a : b;
}

}  // namespace

std::vector<double> godunov_step(const Grid& grid, const std::vector<double>& phi, const std::vector<double>& v,
                                 double dt) {
  const double h = grid.h();
  double vmax = 0.0;
  for (double s : v) vmax = std::max(vmax, std::fabs(s));
  if (vmax > 0.0 && dt > 0.5 * h / vmax * (1.0 + 1e-12))
    throw ConfigError("time step violates CFL 0.5: dt=" + std::to_string(dt));
  std::vector<double> out = phi;
  if (vmax == 0.0) return out;

  const int n = grid.n();
  // Line values with linear extrapolation past the boundary.
  auto at = [&](Index3 i, int k, int off) {
    const int m = i[k] + off;
    if (m >= 0 && m <= n) {
      i[k] = m;
      return phi[grid.linear(i)];
    }
    const int edge = m < 0 ? 0 : n;
    const int inner = m < 0 ? 1 : n - 1;
    i[k] = edge;
    const double e = phi[grid.linear(i)];
    i[k] = inner;
    const double in = phi[grid.linear(i)];
    return e + (e - in) * std::abs(m - edge);
  };

  for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
    const double speed = v[idx];
    if (speed == 0.0) continue;
    const Index3 i = grid.multi(idx);
    double g2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double pm2 = at(i, k, -2), pm1 = at(i, k, -1), p0 = phi[idx], pp1 = at(i, k, 1), pp2 = at(i, k, 2);
      const double d2m = (p0 - 2 * pm1 + pm2) / (h * h);
      const double d20 = (pp1 - 2 * p0 + pm1) / (h * h);
      const double d2p = (pp2 - 2 * pp1 + p0) / (h * h);
      const double dm = (p0 - pm1) / h + 0.5 * h * minmod(d20, d2m);
      const double dp = (pp1 - p0) / h - 0.5 * h * minmod(d20, d2p);
      if (speed > 0.0) {
        const double a = std::max(dm, 0.0), b = std::min(dp, 0.0);
        g2 += std::max(a * a, b * b);
      } else {
        const double a = std::min(dm, 0.0), b = std::max(dp, 0.0);
        g2 += std::max(a * a, b * b);
      }
    }
    out[idx] = phi[idx] - dt * speed * std::sqrt(g2);
  }
  return out;
}

std::vector<Vec3> measure_crossings(const Grid& grid, const std::vector<double>& phi) {
  const SignField signs(grid, phi);
  const auto& p = signs.values();
  std::vector<Vec3> out;
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
    const Index3 i = grid.multi(idx);
    for (int k = 0; k < 3; ++k) {
      if (i[k] == grid.n()) continue;
      const std::int64_t j = grid.linear(i + axis_offset(k, 1));
      if ((p[idx] < 0.0) == (p[j] < 0.0)) continue;
      const double t = p[idx] / (p[idx] - p[j]);
      Vec3 x = grid.point(i);
      x[k] += t * grid.h();
      out.push_back(x);
    }
  }
  return out;
}

double radial_example_speed(double r) {
  const double q = 1.0 + r * r;
  return 4.0 * r / (q * q);
}

double reference_radius(double r0, double t_end, const std::function<double(double)>& speed, double step) {
  const auto f = speed ? speed : std::function<double(double)>(radial_example_speed);
  if (t_end <= 0.0) return r0;
  const long steps = static_cast<long>(std::ceil(t_end / step - 1e-9));
  const double dt = t_end / steps;
  double r = r0;
  for (long s = 0; s < steps; ++s) {
    const double k1 = f(r), k2 = f(r + 0.5 * dt * k1), k3 = f(r + 0.5 * dt * k2), k4 = f(r + dt * k3);
    r += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return r;
}

EvolveReport run_expanding_sphere(int n, const EvolveOptions& options) {
  const Grid grid(n);
  const double h = grid.h();
  const auto problem = preset_problem("example4");
  std::vector<double> phi(grid.size());
  for (std::int64_t idx = 0; idx < grid.size(); ++idx) phi[idx] = norm(grid.point(grid.multi(idx))) - options.r0;

  EvolveReport report;
  report.n = n;
  double t = 0.0;
  int step = 0;
  AssemblyOptions ao;
  ao.threads = options.run.threads;
  ao.coupling = options.run.coupling;
  SolverOptions so = options.run.solver;
  so.threads = options.run.threads;
  std::vector<double> u;

  while (t < options.t_end * (1.0 - 1e-12)) {
    const SignField signs(grid, phi);
    const GridLevelSet surface(grid, signs.values());
    const AssembledSystem sys = assemble_system(grid, surface, signs, *problem, ao);
    bicgstab(sys.matrix, sys.rhs, u, so);

    std::vector<InterfaceSpeed> speeds;
    speeds.reserve(sys.crossings.size());
    EvolveStep rec;
    rec.min_speed = std::numeric_limits<double>::infinity();
    rec.max_speed = -rec.min_speed;
    for (const auto& c : sys.crossings) {
      const double s = gradient_jump_normal(c, interface_gradient(c, u));
      speeds.push_back({c.hit, s});
      rec.min_speed = std::min(rec.min_speed, s);
      rec.max_speed = std::max(rec.max_speed, s);
    }
    const std::vector<double> v = extend_velocity(grid, signs.values(), speeds);
    double vmax = 0.0;
    for (double s : v) vmax = std::max(vmax, std::fabs(s));
    double dt = vmax > 0.0 ? options.cfl * h / vmax : options.t_end;
    if (options.dt_h2 > 0.0) dt = std::min(dt, options.dt_h2 * h * h);
    dt = std::min(dt, options.t_end - t);
    phi = godunov_step(grid, signs.values(), v, dt);
    t += dt;

    rec.step = ++step;
    rec.t = t;
    rec.dt = dt;
    const auto pts = measure_crossings(grid, phi);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (const auto& x : pts) {
      const double r = norm(x);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
    }
    rec.min_radius = lo;
    rec.max_radius = hi;
    rec.mean_radius = pts.empty() ? 0.0 : sum / pts.size();
    report.history.push_back(rec);
  }

  report.reference = reference_radius(options.r0, options.t_end);
  double sq = 0.0;
  for (const auto& x : measure_crossings(grid, phi)) {
    const double r = norm(x);
    report.radii.push_back(r);
    const double e = std::fabs(r - report.reference);
    report.max_error = std::max(report.max_error, e);
    sq += e * e;
  }
  if (report.radii.empty()) throw Error("evolved interface left the grid");
  report.rmse = std::sqrt(sq / report.radii.size());
  return report;
}

void write_history_csv(std::ostream& out, const EvolveReport& report) {
  out << "step,t,dt,min_radius,mean_radius,max_radius,min_speed,max_speed\n" << std::setprecision(12);
  for (const auto& s : report.history)
    out << s.step << "," << s.t << "," << s.dt << "," << s.min_radius << "," << s.mean_radius << "," << s.max_radius
        << "," << s.min_speed << "," << s.max_speed << "\n";
}

void write_radii_csv(std::ostream& out, const EvolveReport& report) {
  out << "radius,error\n" << std::setprecision(12);
  for (double r : report.radii) out << r << "," << (r - report.reference) << "\n";
}

}  // namespace ccim
