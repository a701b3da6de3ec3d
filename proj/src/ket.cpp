#include "steercert/ket.hpp"

#include <cmath>
#include <string>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/simd/kernels.hpp"

namespace steercert {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw SizeError("Ket: factor dimension must be positive");
    p *= d;
  }
  return p;
}

}  // namespace

Ket::Ket(std::vector<cplx> amplitudes, std::vector<std::size_t> factor_dims, double tol)
    : amps_(std::move(amplitudes)), dims_(std::move(factor_dims)) {
  if (amps_.empty()) throw SizeError("Ket: empty amplitude vector");
  if (dims_.empty()) dims_ = {amps_.size()};
  if (product(dims_) != amps_.size()) {
    throw SizeError("Ket: factor dimensions multiply to " + std::to_string(product(dims_)) + ", expected " +
                    std::to_string(amps_.size()));
  }
  for (const cplx& z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("Ket: non-finite amplitude");
  }
  double n = norm(amps_);
  if (std::abs(n - 1.0) > tol) throw DomainError("Ket: norm " + std::to_string(n) + " is not 1");
}

Ket::Ket(std::vector<cplx> amplitudes, double tol) : Ket(std::move(amplitudes), {}, tol) {}

Ket Ket::normalized(std::vector<cplx> amplitudes, std::vector<std::size_t> factor_dims) {
  double n = norm(amplitudes);
  if (!(n > 0.0)) throw DomainError("Ket: cannot normalize a zero vector");
  for (cplx& z : amplitudes) z /= n;
  return Ket(std::move(amplitudes), std::move(factor_dims));
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw IndexError("Ket::basis: index out of range");
  std::vector<cplx> v(dim);
  v[index] = 1.0;
  return Ket(std::move(v));
}

ComplexMatrix Ket::projector() const { return ComplexMatrix::outer(amps_, amps_); }

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (!m_.is_square()) throw SizeError("DensityMatrix: matrix not square");
  if (m_.hermiticity_residual() > tol) throw DomainError("DensityMatrix: not Hermitian");
  cplx t = m_.trace();
  if (std::abs(t - 1.0) > tol) throw DomainError("DensityMatrix: trace " + std::to_string(t.real()) + " is not 1");
  EigResult e = hermitian_eig(m_, tol);
  if (e.values.back() < -tol) {
    throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(e.values.back()));
  }
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw SizeError("inner: length mismatch");
  return simd::dotc(a.size(), a.data(), b.data());
}

double norm(std::span<const cplx> v) { return std::sqrt(std::real(simd::dotc(v.size(), v.data(), v.data()))); }

Ket tensor(const Ket& a, const Ket& b) {
  std::vector<cplx> v(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) v[i * b.dim() + j] = a[i] * b[j];
  std::vector<std::size_t> dims = a.factor_dims();
  dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
  return Ket(std::move(v), std::move(dims), 1e-8);
}

cplx expectation(const Ket& psi, const ComplexMatrix& op) {
  if (op.rows() != psi.dim() || op.cols() != psi.dim()) throw SizeError("expectation: operator does not match state");
  std::vector<cplx> w = op.apply(psi.amplitudes());
  return inner(psi.amplitudes(), w);
}

}  // namespace steercert
