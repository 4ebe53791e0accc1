#pragma once

// CSR storage and right-preconditioned BiCGSTAB with ILU(0) for the global system.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ccim {

struct CsrMatrix {
  std::int64_t n = 0;
  std::vector<std::int64_t> offsets{0};
  std::vector<std::int32_t> cols;
  std::vector<double> vals;

  std::int64_t nnz() const { return static_cast<std::int64_t>(vals.size()); }
  /// Appends a row (n grows by one); entries need not be sorted, duplicates are summed.
  void push_row(std::vector<std::pair<std::int32_t, double>> entries);
  /// y = A x. Rows are independent, so splitting over threads is bit-stable.
  void multiply(const std::vector<double>& x, std::vector<double>& y, int threads = 1) const;
  double at(std::int64_t row, std::int32_t col) const;
  /// Throws Error when offsets are not monotone or a row has unsorted/duplicate columns.
  void validate() const;
};

/// Zero fill-in incomplete LU on A's pattern.
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& a);
  /// z = (LU)^{-1} r
  void apply(const std::vector<double>& r, std::vector<double>& z) const;
  /// Pivots that had to be shifted away from zero.
  int shifted_pivots() const { return shifted_; }

 private:
  const CsrMatrix* a_;
  std::vector<double> lu_;
  std::vector<std::int64_t> diag_;
  int shifted_ = 0;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  int restarts = 0;
  double seconds = 0.0;
};

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 20000;
  bool precondition = true;
  int threads = 1;
};

/// Solves A x = b starting from x (resized to n if needed). Throws
/// ConvergenceFailure (message carries the report) on breakdown after one restart
/// or when the iteration cap is hit.
SolveReport bicgstab(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                     const SolverOptions& options = {});

/// Matrix Market coordinate format, 1-based.
void write_matrix_market(const CsrMatrix& a, std::ostream& out);
void write_matrix_market(const CsrMatrix& a, const std::string& path);

}  // namespace ccim
