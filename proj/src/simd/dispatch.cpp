#include <cstdlib>
#include <string>

#include "msopt/kernels.hpp"

namespace msopt::simd {

namespace detail {
#if defined(MSOPT_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(MSOPT_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

const KernelTable* avx2_kernels() {
#if defined(MSOPT_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(MSOPT_HAVE_NEON)
  return &detail::kNeonTable;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select_kernels() {
  if (const char* env = std::getenv("MSOPT_SIMD"); env && std::string(env) == "scalar") {
    return scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace msopt::simd
