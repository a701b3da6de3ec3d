// Compiled with -mavx2 -mfma on x86-64 only. Nothing here may be called unless
// the dispatcher has confirmed CPU support.

#include "steercert/simd/kernels.hpp"

#include <immintrin.h>

namespace steercert::simd {
namespace {

// [ar*br - ai*bi, ar*bi + ai*br] for two packed complex numbers in b.
inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d b_swapped = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, b_swapped));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = cplx{};
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t p = 0; p < k; ++p) {
      const cplx av = a[i * k + p];
      if (av.real() == 0.0 && av.imag() == 0.0) continue;
      const __m256d ar = _mm256_set1_pd(av.real());
      const __m256d ai = _mm256_set1_pd(av.imag());
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(cv, cmul_bcast(ar, ai, bv)));
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += av.real() * br - av.imag() * bi;
        crow[2 * j + 1] += av.real() * bi + av.imag() * br;
      }
    }
  }
}

// conj(x).y accumulated as two lanes: xy = [xr yr, xi yi], xsy = [xr yi, xi yr]
cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_direct = _mm256_setzero_pd();
  __m256d acc_swapped = _mm256_setzero_pd();
  const std::size_t n2 = n & ~std::size_t{1};
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc_direct = _mm256_fmadd_pd(xv, yv, acc_direct);
    acc_swapped = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_swapped);
  }
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double re = hsum(acc_direct);
  double im = hsum(_mm256_mul_pd(acc_swapped, sign));
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

// Row i of a times x is the unconjugated dot product, computed as dotc of conj(row).
void gemv_avx2(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  const std::size_t n2 = n & ~std::size_t{1};
  const double* xd = reinterpret_cast<const double*>(x);
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = reinterpret_cast<const double*>(a + i * n);
    __m256d acc_direct = _mm256_setzero_pd();   // [ar xr, ai xi]
    __m256d acc_swapped = _mm256_setzero_pd();  // [ar xi, ai xr]
    std::size_t j = 0;
    for (; j < n2; j += 2) {
      const __m256d av = _mm256_loadu_pd(row + 2 * j);
      const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
      acc_direct = _mm256_fmadd_pd(av, xv, acc_direct);
      acc_swapped = _mm256_fmadd_pd(av, _mm256_permute_pd(xv, 0b0101), acc_swapped);
    }
    double re = hsum(_mm256_mul_pd(acc_direct, sign));
    double im = hsum(acc_swapped);
    for (; j < n; ++j) {
      const cplx av = a[i * n + j];
      re += av.real() * x[j].real() - av.imag() * x[j].imag();
      im += av.real() * x[j].imag() + av.imag() * x[j].real();
    }
    y[i] = cplx(re, im);
  }
}

void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t n2 = n & ~std::size_t{1};
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{gemm_avx2, gemv_avx2, dotc_avx2, axpy_avx2};
  return table;
}

}  // namespace steercert::simd
