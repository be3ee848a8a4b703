#pragma once
// Dense vector kernels used by the simplex inner loops.
//
// Every variant accumulates dot products in four interleaved lanes that are
// combined as (l0 + l1) + (l2 + l3), and none of them fuse multiply-add. The
// scalar reference and the vector variants therefore produce bit-identical
// results, which keeps solver output independent of the host ISA.

#include <cstddef>
#include <span>
#include <string_view>

namespace msopt::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best supported table. MSOPT_SIMD=scalar in the environment pins the
// scalar reference.
const KernelTable& active_kernels();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace msopt::simd
