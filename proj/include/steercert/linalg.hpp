#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/ket.hpp"

namespace steercert {

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t dim_cap = kDefaultDimCap);
ComplexMatrix tensor(std::span<const ComplexMatrix> factors, std::size_t dim_cap = kDefaultDimCap);

// Traces out every factor not listed in keep. The kept factors stay in their
// original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> keep);

// Reduced state of a pure state on the kept factors, without forming |psi><psi|.
ComplexMatrix reduced_density(const Ket& psi, std::span<const std::size_t> keep);

// I (x) ... (x) op (x) ... (x) I with op acting on factor `index`.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> factor_dims, std::size_t index);

// Applies op to factor `index` of psi's amplitude vector.
std::vector<cplx> apply_on_factor(const ComplexMatrix& op, std::span<const cplx> psi,
                                  std::span<const std::size_t> factor_dims, std::size_t index);

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns
};

// Eigenvalues descending. Within a degenerate group the basis is rebuilt by
// Gram-Schmidt on the projected standard basis vectors in index order, and
// every eigenvector has its first significant component made real positive.
EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol = kDefaultTol);

struct SvdResult {
  ComplexMatrix u;
  std::vector<double> s;  // descending
  ComplexMatrix v;
};

SvdResult svd(const ComplexMatrix& m);

// Number of singular values above rel_tol times the largest.
std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-8);

// Unitary factor U of m = U P (square input).
ComplexMatrix polar_unitary(const ComplexMatrix& m);

ComplexMatrix sqrt_psd(const ComplexMatrix& m);
// Pseudo-inverse square root; eigenvalues below rel_tol * max are dropped.
ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& m, double rel_tol = 1e-12);

// Distance from m to the nearest unitary, || |m| - I ||_F.
double unitarity_residual(const ComplexMatrix& m);

double operator_norm(const ComplexMatrix& m);

// Groups a factor list into (A, B, rest) where A is the first factor list
// prefix of dimension dim_a and B the following prefix of dimension dim_b.
// Throws SizeError when no such split exists.
std::array<std::size_t, 3> split_abe(std::span<const std::size_t> factor_dims, std::size_t dim_a,
                                     std::size_t dim_b);

// <psi| a (x) b (x) I_rest |psi>, with a and b acting on the leading factors.
cplx local_expectation(const Ket& psi, const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace steercert
