#pragma once

// Global assembly: one row per grid point, built in parallel over fixed row chunks.

#include <array>
#include <cstdint>
#include <vector>

#include "ccim/coupling.hpp"
#include "ccim/sparse.hpp"

namespace ccim {

/// Affine form over global unknowns.
struct SparseForm {
  std::vector<std::int64_t> index;
  std::vector<double> coef;
  double constant = 0.0;

  static SparseForm from_local(const Grid& grid, const Index3& i, const AffineForm& f);
  double evaluate(const std::vector<double>& u) const;
};

/// One interface crossing, stored once: from its Omega^- endpoint, or from the
/// Omega^+ endpoint when the other one is a boundary node.
struct CrossingRecord {
  Intersection hit;
  Side recorded_from = Side::Minus;
  std::array<SparseForm, 3> grad_own;
  std::array<SparseForm, 3> grad_jump;
};

struct PointRecord {
  Index3 point{};
  std::array<MixedKind, 3> schemes{};
  double condition = 0.0;
  int candidates = 1;
  double rejected_condition = 0.0;
  int radius = 1;
};

struct AssemblyOptions {
  int threads = 1;
  CouplingOptions coupling{};
  bool record_crossings = true;
};

struct AssembledSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<CrossingRecord> crossings;
  std::vector<PointRecord> interface_points;
  double seconds = 0.0;
};

AssembledSystem assemble_system(const Grid& grid, const Surface& surface, const SignField& signs,
                                const Problem& problem, const AssemblyOptions& options = {});

}  // namespace ccim
