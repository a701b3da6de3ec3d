#pragma once

// Complex double-precision inner loops used by the dense linear algebra layer.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The variant is chosen once at first use from the CPU
// feature flags; STEERCERT_SIMD=scalar in the environment forces the
// reference path. Both paths are compiled into every binary so tests can run
// them side by side.
//
// Storage is interleaved (re, im) as laid out by std::complex<double>, and all
// matrices are row-major.

#include <complex>
#include <cstddef>
#include <string_view>

namespace steercert::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  // c[m x n] = a[m x k] * b[k x n]
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c);
  // y[m] = a[m x n] * x[n]
  void (*gemv)(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y);
  // sum_i conj(x_i) y_i
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
  // y += alpha * x
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
};

// Reference kernels, always available.
const KernelTable& scalar_kernels();

// AVX2 kernels; nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();

// Table selected for this process.
const KernelTable& active_kernels();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline void gemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c) {
  active_kernels().gemm(m, n, k, a, b, c);
}
inline void gemv(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  active_kernels().gemv(m, n, a, x, y);
}
inline cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return active_kernels().dotc(n, x, y); }
inline void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) { active_kernels().axpy(n, alpha, x, y); }

}  // namespace steercert::simd
