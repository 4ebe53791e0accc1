#pragma once

// Molecular surfaces built from atom lists (PQR input).

#include <filesystem>
#include <vector>

#include "ccim/surface.hpp"

namespace ccim {

struct Atom {
  Vec3 position{};
  double radius = 0.0;
  /// Elementary-charge units; parsed but not used by the solver.
  double charge = 0.0;
};

/// Reads ATOM/HETATM records; x y z charge radius are the last five fields.
/// Throws ParseError (with line number) on malformed numbers, Error on zero atoms.
std::vector<Atom> parse_pqr(const std::filesystem::path& path);
std::vector<Atom> parse_pqr_text(std::string_view text);

/// Uniform scale and translation so every atom ball lies in [-1+margin, 1-margin]^3.
std::vector<Atom> scale_to_box(const std::vector<Atom>& atoms, double margin = 0.2);

/// phi(x) = level - sum_i chi(r_i - |x - p_i|), chi(t) = (1 + tanh(t/eta)) / 2.
SurfacePtr molecular_surface(std::vector<Atom> atoms, double level, double eta);

}  // namespace ccim
