#pragma once

// Data-parallel inner loops shared by the affine-form algebra and the Krylov solver.
//
// Each kernel has a scalar reference implementation and an AVX2 variant. The active
// table is picked once at startup from CPUID; setting CCIM_SIMD=scalar in the
// environment forces the reference path. Elementwise kernels are bitwise identical
// across variants (no FMA contraction); reductions agree to rounding.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ccim::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  /// x *= a
  void (*scale)(double a, double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// max |x_i|
  double (*max_abs)(const double* x, std::size_t n);
  /// y = A x for CSR rows [row_begin, row_end)
  void (*csr_matvec)(const std::int64_t* offsets, const std::int32_t* cols, const double* vals, const double* x,
                     double* y, std::size_t row_begin, std::size_t row_end);
};

const KernelTable& scalar_kernels();
/// Returns nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();
bool cpu_has_avx2();

/// The table selected for this process.
const KernelTable& active();
/// Override the selection (tests); returns the previous table.
const KernelTable& set_active(const KernelTable& table);

std::string_view isa_name(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) { active().axpy(a, x.data(), y.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) { return active().dot(x.data(), y.data(), x.size()); }

}  // namespace ccim::simd
