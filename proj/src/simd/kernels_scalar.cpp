#include "steercert/simd/kernels.hpp"

namespace steercert::simd {
namespace {

void gemm_scalar(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = cplx{};
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const cplx* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        crow[j] = cplx(crow[j].real() + (ar * br - ai * bi), crow[j].imag() + (ar * bi + ai * br));
      }
    }
  }
}

void gemv_scalar(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < m; ++i) {
    double re = 0.0;
    double im = 0.0;
    const cplx* row = a + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
      im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
    }
    y[i] = cplx(re, im);
  }
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = cplx(y[i].real() + (ar * x[i].real() - ai * x[i].imag()),
                y[i].imag() + (ar * x[i].imag() + ai * x[i].real()));
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{gemm_scalar, gemv_scalar, dotc_scalar, axpy_scalar};
  return table;
}

}  // namespace steercert::simd
