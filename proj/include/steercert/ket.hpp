#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "steercert/complex_matrix.hpp"

namespace steercert {

// Normalized pure state with tensor-factor bookkeeping. The first factor is
// the most significant index, matching tensor() block ordering.
class Ket {
 public:
  Ket() = default;
  // Throws DomainError if the norm deviates from 1 by more than tol.
  Ket(std::vector<cplx> amplitudes, std::vector<std::size_t> factor_dims, double tol = kDefaultTol);
  Ket(std::vector<cplx> amplitudes, double tol = kDefaultTol);

  // Rescales to unit norm; throws DomainError on a zero vector.
  static Ket normalized(std::vector<cplx> amplitudes, std::vector<std::size_t> factor_dims);
  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  const std::vector<cplx>& vec() const noexcept { return amps_; }
  const std::vector<std::size_t>& factor_dims() const noexcept { return dims_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  ComplexMatrix projector() const;

 private:
  std::vector<cplx> amps_;
  std::vector<std::size_t> dims_;
};

// Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

// Kronecker product of two kets; factor lists are concatenated.
Ket tensor(const Ket& a, const Ket& b);

// <psi| op |psi>
cplx expectation(const Ket& psi, const ComplexMatrix& op);

}  // namespace steercert
