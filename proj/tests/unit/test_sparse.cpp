#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ccim/assembly.hpp"
#include "ccim/error.hpp"
#include "ccim/problem.hpp"
#include "ccim/sparse.hpp"
#include "support.hpp"

using namespace ccim;
using ccim::testing::uniform;

namespace {

using Dense = std::vector<std::vector<double>>;

CsrMatrix from_dense(const Dense& d) {
  CsrMatrix m;
  for (const auto& row : d) {
    std::vector<std::pair<std::int32_t, double>> e;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0.0) e.emplace_back(static_cast<std::int32_t>(j), row[j]);
    m.push_row(std::move(e));
  }
  return m;
}

// Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

Dense random_dominant(std::size_t n, double density) {
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && uniform(0, 1) < density) {
        a[i][j] = uniform(-1, 1);
        off += std::fabs(a[i][j]);
      }
    a[i][i] = off + 1.0;
  }
  return a;
}

}  // namespace

TEST(Csr, PushRowSortsAndSums) {
  CsrMatrix m;
  m.push_row({{3, 1.0}, {0, 2.0}, {3, 0.5}});
  EXPECT_EQ(m.n, 1);
  EXPECT_DOUBLE_EQ(m.at(0, 3), 1.5);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(m.at(0, 1), 0.0);
  EXPECT_EQ(m.nnz(), 2);
}

TEST(Csr, ValidateRejectsUnsorted) {
  CsrMatrix m;
  m.n = 1;
  m.offsets = {0, 2};
  m.cols = {1, 0};
  m.vals = {1.0, 1.0};
  EXPECT_THROW(m.validate(), Error);
}

TEST(Csr, MatvecMatchesDense) {
  const auto d = random_dominant(100, 0.1);
  const auto m = from_dense(d);
  std::vector<double> x(100), y;
  for (auto& v : x) v = uniform(-1, 1);
  m.multiply(x, y);
  for (std::size_t i = 0; i < 100; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 100; ++j) s += d[i][j] * x[j];
    EXPECT_NEAR(y[i], s, 1e-13);
  }
  std::vector<double> y3;
  m.multiply(x, y3, 3);
  EXPECT_EQ(y, y3);
}

TEST(Bicgstab, IdentityAndDiagonal) {
  const std::size_t n = 5;
  Dense eye(n, std::vector<double>(n, 0.0)), diag = eye;
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    eye[i][i] = 1.0;
    diag[i][i] = i + 1.0;
    b[i] = uniform(-1, 1);
  }
  std::vector<double> x;
  const auto r1 = bicgstab(from_dense(eye), b, x);
  EXPECT_LE(r1.iterations, 1);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], b[i], 1e-12);
  x.clear();
  SolverOptions plain;
  plain.precondition = false;
  bicgstab(from_dense(diag), b, x, plain);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], b[i] / (i + 1.0), 1e-9);
}

// ILU(0) of a tridiagonal matrix is exact.
TEST(Bicgstab, TridiagonalExactPreconditioner) {
  const std::size_t n = 50;
  Dense a(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = 2.0;
    if (i > 0) a[i][i - 1] = -1.0;
    if (i + 1 < n) a[i][i + 1] = -1.0;
  }
  std::vector<double> x;
  const auto r = bicgstab(from_dense(a), b, x);
  EXPECT_LE(r.iterations, 2);
  const auto ref = dense_solve(a, b);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-8 * std::fabs(ref[i]));
}

TEST(Bicgstab, RandomDominantMatchesDenseLu) {
  const auto a = random_dominant(200, 0.05);
  std::vector<double> b(200);
  for (auto& v : b) v = uniform(-1, 1);
  const auto ref = dense_solve(a, b);
  std::vector<double> x;
  SolverOptions o;
  o.tolerance = 1e-12;
  const auto r = bicgstab(from_dense(a), b, x, o);
  EXPECT_TRUE(r.converged);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    err = std::max(err, std::fabs(x[i] - ref[i]));
    scale = std::max(scale, std::fabs(ref[i]));
  }
  EXPECT_LE(err / scale, 1e-10);
}

TEST(Bicgstab, IterationCapThrows) {
  const auto a = random_dominant(200, 0.3);
  std::vector<double> b(200, 1.0), x;
  SolverOptions o;
  o.max_iterations = 1;
  o.precondition = false;
  o.tolerance = 1e-14;
  EXPECT_THROW(bicgstab(from_dense(a), b, x, o), ConvergenceFailure);
}

TEST(Bicgstab, PreconditionerReducesIterations) {
  const Grid grid(40);
  const auto surface = make_ellipsoid();
  const SignField signs(grid, *surface);
  const auto problem = preset_problem("example1");
  AssemblyOptions ao;
  ao.record_crossings = false;
  const auto sys = assemble_system(grid, *surface, signs, *problem, ao);
  std::vector<double> x1, x2;
  SolverOptions with, without;
  without.precondition = false;
  const auto r1 = bicgstab(sys.matrix, sys.rhs, x1, with);
  const auto r2 = bicgstab(sys.matrix, sys.rhs, x2, without);
  EXPECT_LT(r1.iterations, r2.iterations);
  EXPECT_LE(r1.relative_residual, 1e-9);
}

TEST(MatrixMarket, Format) {
  CsrMatrix m;
  m.push_row({{0, 1.5}});
  m.push_row({{0, -2.0}, {1, 3.0}});
  std::ostringstream out;
  write_matrix_market(m, out);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "%%MatrixMarket matrix coordinate real general");
  std::getline(in, line);
  EXPECT_EQ(line, "2 2 3");
  int r, c;
  double v;
  in >> r >> c >> v;
  EXPECT_EQ(r, 1);
  EXPECT_EQ(c, 1);
  EXPECT_DOUBLE_EQ(v, 1.5);
}
