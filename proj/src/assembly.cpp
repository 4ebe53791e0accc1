#include "ccim/assembly.hpp"

#include <algorithm>
#include <chrono>

#include "ccim/error.hpp"
#include "ccim/parallel.hpp"

namespace ccim {

SparseForm SparseForm::from_local(const Grid& grid, const Index3& i, const AffineForm& f) {
  SparseForm out;
  for (Symbol s = 0; s < kGridSymbols; ++s) {
    if (f[s] == 0.0) continue;
    out.index.push_back(grid.linear(i + symbol::offset_of(s)));
    out.coef.push_back(f[s]);
  }
  out.constant = f.constant_term();
  return out;
}

double SparseForm::evaluate(const std::vector<double>& u) const {
  double v = constant;
  for (std::size_t p = 0; p < index.size(); ++p) v += coef[p] * u[index[p]];
  return v;
}

namespace {

struct Chunk {
  std::vector<std::int64_t> row_nnz;
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  std::vector<double> rhs;
  std::vector<CrossingRecord> crossings;
  std::vector<PointRecord> points;
};

void append(Chunk& c, PdeRow row) {
  std::sort(row.entries.begin(), row.entries.end());
  std::int64_t count = 0;
  for (std::size_t p = 0; p < row.entries.size(); ++p) {
    if (count > 0 && c.cols.back() == row.entries[p].first) {
      c.vals.back() += row.entries[p].second;
      continue;
    }
    c.cols.push_back(static_cast<std::int32_t>(row.entries[p].first));
    c.vals.push_back(row.entries[p].second);
    ++count;
  }
  c.row_nnz.push_back(count);
  c.rhs.push_back(row.rhs);
}

}  // namespace

AssembledSystem assemble_system(const Grid& grid, const Surface& surface, const SignField& signs,
                                const Problem& problem, const AssemblyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (grid.size() > std::int64_t{1} << 31) throw ConfigError("grid too large for 32-bit column indices");
  const AssemblyContext ctx{grid, surface, signs, problem, options.coupling};
  const std::int64_t n = grid.size();
  const int chunk_count = static_cast<int>(std::min<std::int64_t>(n, 256));
  std::vector<Chunk> chunks(chunk_count);

  parallel_chunks(n, chunk_count, options.threads, [&](int c, std::int64_t begin, std::int64_t end) {
    Chunk& out = chunks[c];
    for (std::int64_t idx = begin; idx < end; ++idx) {
      const Index3 i = grid.multi(idx);
      if (grid.on_boundary(i)) {
        append(out, boundary_pde_row(ctx, i));
        continue;
      }
      if (classify_point(signs, i) == PointKind::Interior) {
        append(out, interior_pde_row(ctx, i));
        continue;
      }
      const CouplingResult r = build_coupling(ctx, i);
      append(out, globalize(grid, i, interface_pde_form(ctx, i, r.derivatives)));

      PointRecord pr;
      pr.point = i;
      for (int p = 0; p < 3; ++p) pr.schemes[p] = r.schemes[p].kind;
      pr.condition = r.system.condition;
      pr.candidates = r.candidates;
      pr.rejected_condition = r.rejected_condition;
      pr.radius = r.derivatives.radius;
      out.points.push_back(pr);

      if (!options.record_crossings) continue;
      for (const auto& cf : r.derivatives.crossings) {
        const Index3 far = i + axis_offset(cf.hit.axis, cf.hit.direction);
        if (cf.own != Side::Minus && !grid.on_boundary(far)) continue;
        CrossingRecord rec;
        rec.hit = cf.hit;
        rec.recorded_from = cf.own;
        for (int j = 0; j < 3; ++j) {
          rec.grad_own[j] = SparseForm::from_local(grid, i, cf.grad_own[j]);
          rec.grad_jump[j] = SparseForm::from_local(grid, i, cf.grad_jump[j]);
        }
        out.crossings.push_back(std::move(rec));
      }
    }
  });

  AssembledSystem sys;
  CsrMatrix& m = sys.matrix;
  std::int64_t nnz = 0;
  for (const auto& c : chunks) nnz += static_cast<std::int64_t>(c.cols.size());
  m.n = n;
  m.offsets.reserve(n + 1);
  m.cols.reserve(nnz);
  m.vals.reserve(nnz);
  sys.rhs.reserve(n);
  for (auto& c : chunks) {
    for (std::int64_t k : c.row_nnz) m.offsets.push_back(m.offsets.back() + k);
    m.cols.insert(m.cols.end(), c.cols.begin(), c.cols.end());
    m.vals.insert(m.vals.end(), c.vals.begin(), c.vals.end());
    sys.rhs.insert(sys.rhs.end(), c.rhs.begin(), c.rhs.end());
    for (auto& x : c.crossings) sys.crossings.push_back(std::move(x));
    for (auto& p : c.points) sys.interface_points.push_back(p);
    c = Chunk{};
  }
  sys.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sys;
}

}  // namespace ccim
