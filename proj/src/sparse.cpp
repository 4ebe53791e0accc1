#include "ccim/sparse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "ccim/error.hpp"
#include "ccim/parallel.hpp"
#include "ccim/simd.hpp"

namespace ccim {

void CsrMatrix::push_row(std::vector<std::pair<std::int32_t, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t p = 0; p < entries.size(); ++p) {
    if (!cols.empty() && static_cast<std::int64_t>(cols.size()) > offsets.back() && cols.back() == entries[p].first) {
      vals.back() += entries[p].second;
      continue;
    }
    cols.push_back(entries[p].first);
    vals.push_back(entries[p].second);
  }
  offsets.push_back(static_cast<std::int64_t>(cols.size()));
  ++n;
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y, int threads) const {
  y.resize(static_cast<std::size_t>(n));
  const auto& k = simd::active();
  parallel_chunks(n, std::max(1, threads), threads, [&](int, std::int64_t b, std::int64_t e) {
    k.csr_matvec(offsets.data(), cols.data(), vals.data(), x.data(), y.data(), static_cast<std::size_t>(b),
                 static_cast<std::size_t>(e));
  });
}

double CsrMatrix::at(std::int64_t row, std::int32_t col) const {
  const auto b = cols.begin() + offsets[row], e = cols.begin() + offsets[row + 1];
  const auto it = std::lower_bound(b, e, col);
  return it != e && *it == col ? vals[it - cols.begin()] : 0.0;
}

void CsrMatrix::validate() const {
  if (static_cast<std::int64_t>(offsets.size()) != n + 1 || offsets.front() != 0 ||
      offsets.back() != static_cast<std::int64_t>(cols.size()) || cols.size() != vals.size())
    throw Error("csr: inconsistent sizes");
  for (std::int64_t r = 0; r < n; ++r) {
    if (offsets[r + 1] < offsets[r]) throw Error("csr: offsets not monotone");
    for (std::int64_t p = offsets[r] + 1; p < offsets[r + 1]; ++p)
      if (cols[p] <= cols[p - 1]) throw Error("csr: unsorted or duplicate column in row " + std::to_string(r));
  }
}

Ilu0::Ilu0(const CsrMatrix& a) : a_(&a), lu_(a.vals), diag_(a.n, -1) {
  const auto& off = a.offsets;
  const auto& col = a.cols;
  for (std::int64_t r = 0; r < a.n; ++r)
    for (std::int64_t p = off[r]; p < off[r + 1]; ++p)
      if (col[p] == r) diag_[r] = p;
  for (std::int64_t r = 0; r < a.n; ++r)
    if (diag_[r] < 0) throw Error("ilu0: missing diagonal in row " + std::to_string(r));

  // IKJ variant restricted to the pattern.
  std::vector<std::int64_t> where(a.n, -1);
  for (std::int64_t i = 0; i < a.n; ++i) {
    for (std::int64_t p = off[i]; p < off[i + 1]; ++p) where[col[p]] = p;
    for (std::int64_t p = off[i]; p < off[i + 1] && col[p] < i; ++p) {
      const std::int64_t k = col[p];
      lu_[p] /= lu_[diag_[k]];
      const double m = lu_[p];
      for (std::int64_t q = diag_[k] + 1; q < off[k + 1]; ++q) {
        const std::int64_t w = where[col[q]];
        if (w >= 0) lu_[w] -= m * lu_[q];
      }
    }
    if (lu_[diag_[i]] == 0.0) {
      double row_norm = 0.0;
      for (std::int64_t p = off[i]; p < off[i + 1]; ++p) row_norm += std::fabs(a.vals[p]);
      lu_[diag_[i]] = 1e-12 * (row_norm > 0.0 ? row_norm : 1.0);
      ++shifted_;
    }
    for (std::int64_t p = off[i]; p < off[i + 1]; ++p) where[col[p]] = -1;
  }
}

void Ilu0::apply(const std::vector<double>& r, std::vector<double>& z) const {
  const auto& off = a_->offsets;
  const auto& col = a_->cols;
  const std::int64_t n = a_->n;
  z.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::int64_t p = off[i]; p < diag_[i]; ++p) s -= lu_[p] * z[col[p]];
    z[i] = s;
  }
  for (std::int64_t i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (std::int64_t p = diag_[i] + 1; p < off[i + 1]; ++p) s -= lu_[p] * z[col[p]];
    z[i] = s / lu_[diag_[i]];
  }
}

namespace {

double norm2(const std::vector<double>& v) {
  return std::sqrt(simd::active().dot(v.data(), v.data(), v.size()));
}

std::string describe(const SolveReport& r) {
  std::ostringstream out;
  out << "iterations=" << r.iterations << " residual=" << r.relative_residual << " restarts=" << r.restarts;
  return out.str();
}

}  // namespace

SolveReport bicgstab(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                     const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto& k = simd::active();
  const std::size_t n = static_cast<std::size_t>(a.n);
  if (b.size() != n) throw Error("bicgstab: rhs size mismatch");
  x.resize(n, 0.0);

  SolveReport report;
  const double bnorm = norm2(b);
  auto finish = [&] {
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return finish();
  }

  std::optional<Ilu0> ilu;
  if (options.precondition) ilu.emplace(a);
  auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (ilu)
      ilu->apply(in, out);
    else
      out = in;
  };

  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), phat(n), s(n), shat(n), t(n);
  auto true_residual = [&] {
    a.multiply(x, r, options.threads);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r) / bnorm;
  };

  report.relative_residual = true_residual();
  while (report.iterations < options.max_iterations) {
    if (report.relative_residual <= options.tolerance) {
      report.converged = true;
      return finish();
    }
    // (Re)start from the current iterate.
    rhat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    const double scale = k.dot(rhat.data(), rhat.data(), n);
    bool breakdown = false;

    while (report.iterations < options.max_iterations) {
      const double rho_new = k.dot(rhat.data(), r.data(), n);
      if (std::fabs(rho_new) < 1e-30 * scale) {
        breakdown = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      k.axpy(-omega, v.data(), p.data(), n);
      k.xpby(r.data(), beta, p.data(), n);
      precondition(p, phat);
      a.multiply(phat, v, options.threads);
      const double rv = k.dot(rhat.data(), v.data(), n);
      if (std::fabs(rv) < 1e-30 * scale) {
        breakdown = true;
        break;
      }
      alpha = rho / rv;
      s = r;
      k.axpy(-alpha, v.data(), s.data(), n);
      ++report.iterations;
      if (norm2(s) / bnorm <= options.tolerance) {
        k.axpy(alpha, phat.data(), x.data(), n);
        break;
      }
      precondition(s, shat);
      a.multiply(shat, t, options.threads);
      const double tt = k.dot(t.data(), t.data(), n);
      if (tt == 0.0) {
        breakdown = true;
        break;
      }
      omega = k.dot(t.data(), s.data(), n) / tt;
      k.axpy(alpha, phat.data(), x.data(), n);
      k.axpy(omega, shat.data(), x.data(), n);
      r = s;
      k.axpy(-omega, t.data(), r.data(), n);
      if (norm2(r) / bnorm <= options.tolerance) break;
      if (std::fabs(omega) < 1e-30) {
        breakdown = true;
        break;
      }
    }
    report.relative_residual = true_residual();
    if (report.relative_residual <= options.tolerance) continue;
    if (breakdown || report.iterations < options.max_iterations) {
      // Recursive residual drifted or the recurrence broke down: one restart allowed.
      if (report.restarts >= 1 && breakdown) throw ConvergenceFailure("bicgstab breakdown: " + describe(report));
      ++report.restarts;
      if (report.restarts > 3) throw ConvergenceFailure("bicgstab stagnation: " + describe(report));
    }
  }
  report.relative_residual = true_residual();
  if (report.relative_residual <= options.tolerance) {
    report.converged = true;
    return finish();
  }
  finish();
  throw ConvergenceFailure("bicgstab: iteration cap reached, " + describe(report));
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n << " " << a.n << " " << a.nnz() << "\n";
  out << std::setprecision(17);
  for (std::int64_t r = 0; r < a.n; ++r)
    for (std::int64_t p = a.offsets[r]; p < a.offsets[r + 1]; ++p)
      out << (r + 1) << " " << (a.cols[p] + 1) << " " << a.vals[p] << "\n";
}

void write_matrix_market(const CsrMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  write_matrix_market(a, out);
}

}  // namespace ccim
