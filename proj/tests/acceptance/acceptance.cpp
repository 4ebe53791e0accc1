// Acceptance suite: one PASS/FAIL/BLOCKED line per criterion. Exit status is 1 if
// any criterion fails; BLOCKED (missing external data) does not fail the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ccim/driver.hpp"
#include "ccim/error.hpp"
#include "ccim/evolve.hpp"
#include "ccim/jumps.hpp"
#include "ccim/molecule.hpp"
#include "mixed_battery.hpp"
#include "support.hpp"

using namespace ccim;
using namespace ccim::testing;

namespace {

// Tolerances.
constexpr double kSlopeU = -1.8;
constexpr double kSlopeGrad = -1.6;
constexpr double kRatioMin = 3.2;
constexpr double kQuadErrU = 1e-7;
constexpr double kQuadErrGrad = 1e-6;
constexpr double kDetTol = 1e-10;
constexpr double kPoissonSlope = -1.9;
constexpr double kEvolveSlope = -1.7;
constexpr double kIterSlopeLo = 0.6, kIterSlopeHi = 1.5;
constexpr double kResidual = 1e-9;
constexpr double kOrderTol = 0.2;
constexpr int kMoleculeAtoms = 486;

enum class Status { Pass, Fail, Blocked };

struct Outcome {
  Status status;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::map<std::tuple<std::string, std::string, int>, RunResult> cache;

const RunResult& run(const std::string& surface, const std::string& problem, int n) {
  const auto key = std::make_tuple(surface, problem, n);
  auto it = cache.find(key);
  if (it == cache.end()) {
    RunResult r = run_manufactured(*catalog_surface(surface), *preset_problem(problem), n);
    r.u.clear();
    r.u.shrink_to_fit();
    r.errors.gradients.clear();
    it = cache.emplace(key, std::move(r)).first;
  }
  return it->second;
}

Outcome sweep(const std::vector<std::string>& surfaces, const std::string& problem) {
  const std::vector<int> ns{20, 30, 40, 60, 80};
  bool ok = true;
  std::ostringstream d;
  for (const auto& s : surfaces) {
    std::vector<std::pair<double, double>> eu, eg;
    for (int n : ns) {
      const auto& r = run(s, problem, n);
      eu.emplace_back(n, r.errors.err_u_inf);
      eg.emplace_back(n, r.errors.err_grad_inf);
    }
    const double su = fit_slope(eu), sg = fit_slope(eg);
    ok &= su <= kSlopeU && sg <= kSlopeGrad;
    d << s << " slope_u=" << fmt(su) << " slope_grad=" << fmt(sg) << "; ";
  }
  return {ok ? Status::Pass : Status::Fail, d.str()};
}

Outcome criterion1() { return sweep({"ellipsoid", "donut", "peanut"}, "example1"); }

Outcome criterion2() {
  bool ok = true;
  std::ostringstream d;
  for (const std::string s : {"eight_balls", "banana"}) {
    const double ratio = run(s, "example1", 40).errors.err_u_inf / run(s, "example1", 80).errors.err_u_inf;
    ok &= ratio >= kRatioMin;
    d << s << " err40/err80=" << fmt(ratio) << "; ";
  }
  return {ok ? Status::Pass : Status::Fail, d.str()};
}

Outcome criterion3() { return sweep({"ellipsoid"}, "example3"); }

Outcome criterion4() {
  const auto r = run_manufactured(*make_sphere(0.5), *preset_problem("quadratic_oracle"), 20);
  const bool ok = r.errors.err_u_inf <= kQuadErrU && r.errors.err_grad_inf <= kQuadErrGrad;
  return {ok ? Status::Pass : Status::Fail,
          "err_u=" + fmt(r.errors.err_u_inf) + " err_grad=" + fmt(r.errors.err_grad_inf)};
}

Outcome criterion5() {
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    SurfaceGeometry g;
    g.normal = random_unit();
    const auto f = tangent_frame(g.normal);
    const double th = uniform(0, 2 * M_PI), flip = uniform(0, 1) < 0.5 ? -1.0 : 1.0;
    g.tangents[0] = std::cos(th) * f[0] + std::sin(th) * f[1];
    g.tangents[1] = flip * (-std::sin(th) * f[0] + std::cos(th) * f[1]);
    const auto lu = SmallLu::factor(assemble_G(g));
    worst = std::max(worst, lu ? std::fabs(std::fabs(lu->determinant()) - 1.0) : 1.0);
  }
  return {worst <= kDetTol ? Status::Pass : Status::Fail, "max | |det G| - 1 | = " + fmt(worst)};
}

Outcome criterion6() {
  const auto far = make_plane({1, 0, 0}, 5.0);
  const auto p = preset_problem("poisson");
  const Grid grid(20);
  const SignField signs(grid, *far);
  const auto sys = assemble_system(grid, *far, signs, *p);
  const double h = grid.h();
  bool bitwise = sys.interface_points.empty();
  for (std::int64_t r = 0; r < grid.size() && bitwise; ++r) {
    const Index3 i = grid.multi(r);
    if (grid.on_boundary(i)) continue;
    std::vector<std::pair<std::int64_t, double>> expected{{r, 6.0 / (h * h)}};
    for (int k = 0; k < 3; ++k)
      for (int s : {-1, 1}) expected.emplace_back(grid.linear(i + axis_offset(k, s)), -1.0 / (h * h));
    std::sort(expected.begin(), expected.end());
    const auto b = sys.matrix.offsets[r], e = sys.matrix.offsets[r + 1];
    if (e - b != 7) bitwise = false;
    for (std::int64_t q = b; q < e && bitwise; ++q)
      bitwise = sys.matrix.cols[q] == expected[q - b].first && sys.matrix.vals[q] == expected[q - b].second;
  }
  std::vector<std::pair<double, double>> pts;
  for (int n : {20, 40, 80}) pts.emplace_back(n, run_manufactured(*far, *p, n).errors.err_u_inf);
  const double slope = fit_slope(pts);
  return {bitwise && slope <= kPoissonSlope ? Status::Pass : Status::Fail,
          std::string("7-point rows bitwise=") + (bitwise ? "yes" : "no") + " poisson slope=" + fmt(slope)};
}

Outcome criterion7() {
  std::vector<std::pair<double, double>> pts;
  std::ostringstream d;
  for (int n : {20, 30, 40}) {
    const auto rep = run_expanding_sphere(n);
    pts.emplace_back(n, rep.rmse);
    d << "N=" << n << " rmse=" << fmt(rep.rmse) << "; ";
  }
  const double slope = fit_slope(pts);
  d << "slope=" << fmt(slope);
  return {slope <= kEvolveSlope ? Status::Pass : Status::Fail, d.str()};
}

Outcome criterion8() {
  std::vector<std::pair<double, double>> pts;
  bool residual_ok = true;
  std::ostringstream d;
  for (int n : {40, 60, 80, 100}) {
    const auto& r = run("ellipsoid", "example1", n);
    pts.emplace_back(n, r.solve.iterations);
    residual_ok &= r.solve.converged && r.solve.relative_residual <= kResidual;
    d << "N=" << n << " it=" << r.solve.iterations << "; ";
  }
  const double slope = fit_slope(pts);
  d << "slope=" << fmt(slope);
  const bool ok = residual_ok && slope >= kIterSlopeLo && slope <= kIterSlopeHi;
  return {ok ? Status::Pass : Status::Fail, d.str()};
}

std::filesystem::path molecule_path() {
  if (const char* env = std::getenv("CCIM_1D63_PQR")) return env;
  return std::filesystem::path(CCIM_SOURCE_DIR) / "tests" / "data" / "1D63.pqr";
}

Outcome molecule_smoke(const std::vector<Atom>& atoms) {
  const auto surface = molecular_surface(scale_to_box(atoms), 0.25, 1.0 / 40.0);
  try {
    const auto r = run_manufactured(*surface, *preset_problem("example1"), 80);
    const bool ok = r.solve.converged && std::isfinite(r.errors.err_u_inf) && std::isfinite(r.errors.err_grad_inf);
    return {ok ? Status::Pass : Status::Fail, "atoms=" + std::to_string(atoms.size()) +
                                                  " interface_points=" + std::to_string(r.interface_points) +
                                                  " iterations=" + std::to_string(r.solve.iterations) +
                                                  " err_u=" + fmt(r.errors.err_u_inf)};
  } catch (const UnresolvablePoint& e) {
    return {Status::Fail, std::string("unresolvable point: ") + e.what()};
  }
}

// A deterministic 486-atom chain: exercises parsing and a bumpy multi-atom surface.
std::vector<Atom> synthetic_molecule() {
  std::ostringstream pqr;
  for (int a = 0; a < kMoleculeAtoms; ++a) {
    const double t = 0.21 * a;
    const double r = 9.0 + 3.0 * std::sin(0.05 * a);
    pqr << "ATOM " << a + 1 << " CA GLY " << a / 4 + 1 << ' ' << r * std::cos(t) << ' ' << r * std::sin(t) << ' '
        << 0.06 * a - 14.0 << " 0.1 " << (a % 3 == 0 ? 1.9 : 1.6) << "\n";
  }
  return parse_pqr_text(pqr.str());
}

Outcome criterion9() {
  const auto path = molecule_path();
  const Outcome sub = molecule_smoke(synthetic_molecule());
  const std::string sub_text = std::string(" | synthetic 486-atom substitute: ") +
                               (sub.status == Status::Pass ? "pass " : "fail ") + sub.detail;
  if (!std::filesystem::exists(path))
    return {Status::Blocked, "1D63 PQR not available (" + path.string() + ")" + sub_text};
  const auto atoms = parse_pqr(path);
  if (atoms.size() != static_cast<std::size_t>(kMoleculeAtoms))
    return {Status::Fail, "parsed " + std::to_string(atoms.size()) + " atoms, expected 486"};
  Outcome o = molecule_smoke(atoms);
  o.detail += sub_text;
  return o;
}

Outcome criterion10() {
  const Vec3 p{0.1, -0.2, 0.15};
  double worst = 0.0;
  int count = 0;
  for (const auto& s : scheme_catalog()) {
    const double e1 = scheme_error(s, 0.1, p), e2 = scheme_error(s, 0.05, p), e3 = scheme_error(s, 0.025, p);
    for (double order : {std::log2(e1 / e2), std::log2(e2 / e3)})
      worst = std::max(worst, std::fabs(order - nominal_order(s)));
    ++count;
  }
  return {worst <= kOrderTol ? Status::Pass : Status::Fail,
          std::to_string(count) + " schemes, max |observed - nominal| = " + fmt(worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"convergence, example 1 on ellipsoid/donut/peanut", criterion1},
      {"error ratio on eight_balls/banana", criterion2},
      {"convergence, example 3 (a term) on ellipsoid", criterion3},
      {"piecewise-quadratic exactness", criterion4},
      {"|det G| = 1", criterion5},
      {"interior reduction and Poisson order", criterion6},
      {"expanding sphere radii order", criterion7},
      {"BiCGSTAB iteration scaling", criterion8},
      {"molecular surface smoke test", criterion9},
      {"mixed-scheme truncation orders", criterion10},
  };
  bool failed = false;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "BLOCKED";
    failed |= o.status == Status::Fail;
    std::printf("criterion %2zu %-7s %s: %s [%.1fs]\n", c + 1, tag, criteria[c].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
