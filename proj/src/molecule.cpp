#include "ccim/molecule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ccim/error.hpp"

namespace ccim {

namespace {

double parse_number(std::string_view token, int line) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ParseError("malformed numeric field '" + std::string(token) + "'", line);
  return v;
}

}  // namespace

std::vector<Atom> parse_pqr_text(std::string_view text) {
  std::vector<Atom> atoms;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(std::move(t));
    if (tokens.empty() || (tokens[0] != "ATOM" && tokens[0] != "HETATM")) continue;
    if (tokens.size() < 6) throw ParseError("too few fields in " + tokens[0] + " record", line_no);
    const std::size_t base = tokens.size() - 5;
    Atom atom;
    for (int k = 0; k < 3; ++k) atom.position[k] = parse_number(tokens[base + k], line_no);
    atom.charge = parse_number(tokens[base + 3], line_no);
    atom.radius = parse_number(tokens[base + 4], line_no);
    if (!(atom.radius > 0.0)) throw ParseError("non-positive atom radius", line_no);
    atoms.push_back(atom);
  }
  if (atoms.empty()) throw Error("no ATOM/HETATM records found");
  return atoms;
}

std::vector<Atom> parse_pqr(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open PQR file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_pqr_text(buffer.str());
}

std::vector<Atom> scale_to_box(const std::vector<Atom>& atoms, double margin) {
  if (atoms.empty()) throw Error("scale_to_box: empty atom list");
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  for (const auto& a : atoms)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], a.position[k] - a.radius);
      hi[k] = std::max(hi[k], a.position[k] + a.radius);
    }
  double half = 0.0;
  Vec3 center{};
  for (int k = 0; k < 3; ++k) {
    center[k] = 0.5 * (lo[k] + hi[k]);
    half = std::max(half, 0.5 * (hi[k] - lo[k]));
  }
  const double s = (1.0 - margin) / half;
  std::vector<Atom> out = atoms;
  for (auto& a : out) {
    a.position = s * (a.position - center);
    a.radius *= s;
  }
  return out;
}

namespace {

class MolecularSurface final : public Surface {
 public:
  MolecularSurface(std::vector<Atom> atoms, double level, double eta)
      : atoms_(std::move(atoms)), level_(level), eta_(eta) {
    // tanh(t/eta) = -1 to double precision once t < -20 eta.
    for (const auto& a : atoms_) {
      const double reach = a.radius + 20.0 * eta_;
      cutoff2_.push_back(reach * reach);
    }
  }

  double phi(const Vec3& x) const override {
    double s = level_;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Vec3 d = x - atoms_[i].position;
      const double d2 = dot(d, d);
      if (d2 > cutoff2_[i]) continue;
      s -= 0.5 * (1.0 + std::tanh((atoms_[i].radius - std::sqrt(d2)) / eta_));
    }
    return s;
  }

  Vec3 gradient(const Vec3& x) const override {
    Vec3 g{};
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Vec3 d = x - atoms_[i].position;
      const double d2 = dot(d, d);
      if (d2 > cutoff2_[i] || d2 == 0.0) continue;
      const double r = std::sqrt(d2);
      const double th = std::tanh((atoms_[i].radius - r) / eta_);
      const double chi1 = (1.0 - th * th) / (2.0 * eta_);
      g = g + (chi1 / r) * d;
    }
    return g;
  }

  Mat3 hessian(const Vec3& x) const override {
    Mat3 h{};
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Vec3 d = x - atoms_[i].position;
      const double d2 = dot(d, d);
      if (d2 > cutoff2_[i] || d2 == 0.0) continue;
      const double r = std::sqrt(d2);
      const Vec3 u = (1.0 / r) * d;
      const double th = std::tanh((atoms_[i].radius - r) / eta_);
      const double chi1 = (1.0 - th * th) / (2.0 * eta_);
      const double chi2 = -th * (1.0 - th * th) / (eta_ * eta_);
      // grad phi = chi'(t) u with t = r_i - r, dt/dx = -u
      const Mat3 uu = outer(u, u);
      h = h + (-chi2) * uu + (chi1 / r) * (identity_mat3() + (-1.0) * uu);
    }
    return h;
  }

  std::string name() const override { return "molecule"; }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cutoff2_;
  double level_;
  double eta_;
};

}  // namespace

SurfacePtr molecular_surface(std::vector<Atom> atoms, double level, double eta) {
  if (atoms.empty()) throw Error("molecular_surface: empty atom list");
  if (!(eta > 0.0)) throw ConfigError("molecular_surface: eta must be positive");
  return std::make_shared<MolecularSurface>(std::move(atoms), level, eta);
}

}  // namespace ccim
