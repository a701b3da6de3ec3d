#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "steercert/ket.hpp"
#include "steercert/measurements.hpp"
#include "steercert/states.hpp"

namespace steercert {

// Phase exponents xi_i for the partially entangled construction, taken
// modulo d^2 - d + 1.
struct PhaseTable {
  std::size_t d = 0;
  std::vector<long long> xi;

  PhaseTable(std::size_t d, std::vector<long long> xi);
  std::size_t modulus() const noexcept { return d * d - d + 1; }

  // Tables for d = 3..6; throws DomainError otherwise.
  static PhaseTable listed(std::size_t d);
};

// True iff all pairwise differences xi_i - xi_j (i != j) are distinct mod d^2-d+1.
bool sidon_check(const PhaseTable& table);

// d^2 elements (1/d) U_{k,l} |nu><nu| U_{k,l}^dagger with U_{k,l} = X^k Z^l,
// at index b = d k + l. Throws NotExtremalError if the Gram rank is below d^2.
Povm covariant_povm(std::size_t d, const Ket& nu);

struct PartialPovmWeights {
  std::vector<double> lambda;  // per element
  std::vector<double> mu;      // amplitudes of |delta_b>
};

PartialPovmWeights partial_povm_weights(const SchmidtVector& sv);

// Diagonal elements lambda_i |i><i| for i <= d-2, then d^2-d+1 phased
// rank-one elements lambda_d |delta_b><delta_b|.
Povm partial_povm(const SchmidtVector& sv, const PhaseTable& table);

struct PovmValidation {
  bool pass = false;
  std::vector<double> min_eigenvalues;
  std::vector<double> hermiticity_residuals;
  double completeness_residual = 0.0;
  std::vector<std::size_t> failing_elements;
  std::string message;
};

PovmValidation validate_povm(const Povm& p, double tol = kDefaultTol);

struct ExtremalityReport {
  bool extremal = false;
  bool all_rank_one = false;
  std::vector<double> second_eig_ratio;  // lambda_2 / lambda_1 per element
  std::size_t gram_rank = 0;
  std::size_t element_count = 0;
};

// Rank one means lambda_2 <= tol lambda_1; the Gram matrix Tr[I_b I_b'] must
// have full rank with singular values below tol * max counted as zero.
ExtremalityReport is_extremal_rank_one(const Povm& p, double tol = 1e-8);

struct Theorem3Report {
  std::size_t d = 0;
  std::size_t outcomes = 0;
  // residual at index (i * d + j) * outcomes + b
  std::vector<double> residuals;
  double max_residual = 0.0;
  // d * l^b_{ij} from the W-basis expansion of the ideal elements, compared
  // against the measured correlators.
  double decomposition_residual = 0.0;
  // ||sum_ij l^b_ij W_ij - I_b||_F, max over b
  double reconstruction_residual = 0.0;

  double at(std::size_t i, std::size_t j, std::size_t b) const { return residuals[(i * d + j) * outcomes + b]; }
};

// |<X^i Z^j (x) R_b (x) I_E>_psi - <X^i Z^j (x) I_b>_{psi(alpha)}| for all i, j, b.
// Alice is the first factor of psi (dimension d); R acts on the following factors.
Theorem3Report theorem3_residuals(const Povm& r_povm, const Povm& ideal, const Ket& psi, const SchmidtVector& sv);

// W_{ij} = P^{-1} (X^i Z^j)^* P^{-1} with P = diag(alpha).
ComplexMatrix w_basis_element(const SchmidtVector& sv, std::size_t i, std::size_t j);

// Replaces element e by (1 - eps) N_e + eps I, then restores
// completeness by S^{-1/2} N_b S^{-1/2} with S the new element sum.
Povm tamper_povm(const Povm& p, std::size_t element, double eps);

// R_b = I_b (x) I_junk
Povm extend_povm(const Povm& p, std::size_t junk_dim);

// R_b -> u R_b u^dagger
Povm conjugate_povm(const Povm& p, const ComplexMatrix& u);

}  // namespace steercert
