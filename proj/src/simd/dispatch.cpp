#include <cstdlib>
#include <string>

#include "ccim/simd.hpp"

namespace ccim::simd {

#if !defined(CCIM_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const KernelTable* select_default() {
  if (const char* env = std::getenv("CCIM_SIMD"); env != nullptr && std::string(env) == "scalar")
    return &scalar_kernels();
  if (cpu_has_avx2() && avx2_kernels() != nullptr) return avx2_kernels();
  return &scalar_kernels();
}

const KernelTable*& current() {
  static const KernelTable* table = select_default();
  return table;
}

}  // namespace

const KernelTable& active() { return *current(); }

const KernelTable& set_active(const KernelTable& table) {
  const KernelTable& previous = *current();
  current() = &table;
  return previous;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace ccim::simd
