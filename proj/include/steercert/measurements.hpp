#pragma once

#include <cstddef>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/ket.hpp"

namespace steercert {

// omega^k with omega = exp(2 pi i / d); k is reduced mod d first so that
// integer powers are reproduced exactly.
cplx omega_pow(std::size_t d, long long k);

enum class PauliKind { Z, X };

// Z_d = sum_i omega^i |i><i|, X_d = sum_i |i+1 mod d><i|.
ComplexMatrix generalized_pauli(std::size_t d, PauliKind kind);

// X_d^i Z_d^j
ComplexMatrix weyl_operator(std::size_t d, std::size_t i, std::size_t j);

// Ordered list of operators on a common space. Shape is checked here;
// positivity and completeness are reported by validate_povm.
class Povm {
 public:
  Povm() = default;
  explicit Povm(std::vector<ComplexMatrix> elements);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const ComplexMatrix& operator[](std::size_t b) const { return elements_[b]; }
  const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }

 private:
  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> elements_;
};

// Fourier picture of a d-outcome measurement: B_k = sum_a omega^{ka} N_a.
class GeneralizedObservable {
 public:
  GeneralizedObservable() = default;
  // Validates B_0 = I, B_{d-k} = B_k^dagger and ||B_k||_op <= 1 within tol.
  explicit GeneralizedObservable(std::vector<ComplexMatrix> operators, double tol = kDefaultTol);

  // Projective measurement with B_k = u^k. u must satisfy u^d = I for the
  // result to describe a measurement; that is checked by is_projective.
  static GeneralizedObservable from_unitary(const ComplexMatrix& u, std::size_t d);

  std::size_t outcomes() const noexcept { return ops_.size(); }
  std::size_t dim() const noexcept { return ops_.empty() ? 0 : ops_[0].rows(); }
  const ComplexMatrix& operator[](std::size_t k) const { return ops_[k]; }
  const std::vector<ComplexMatrix>& operators() const noexcept { return ops_; }

  // Conjugates every operator: B_k -> u B_k u^dagger.
  GeneralizedObservable conjugated(const ComplexMatrix& u) const;

 private:
  std::vector<ComplexMatrix> ops_;
};

GeneralizedObservable povm_to_observable(const Povm& p);

// N_a = (1/d) sum_k omega^{-ak} B_k. Eigenvalues in [-1e-6, 0) are clipped
// and the set is renormalized; anything more negative throws
// InvalidObservableError.
Povm observable_to_povm(const GeneralizedObservable& g);

struct ProjectivityReport {
  bool projective = false;
  double unitarity_residual = 0.0;  // distance from B_1 to the nearest unitary
  double order_residual = 0.0;      // ||B_1^d - I||_F
  double powers_residual = 0.0;     // max_k ||B_k - B_1^k||_F
};

ProjectivityReport is_projective(const GeneralizedObservable& g, double tol);

// p(a,b|x,y) stored flat at ((x * ny + y) * d + a) * d + b.
class CorrelationTable {
 public:
  CorrelationTable() = default;
  CorrelationTable(std::size_t d, std::size_t nx, std::size_t ny, std::vector<double> p, double tol = kDefaultTol);

  std::size_t d() const noexcept { return d_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  const std::vector<double>& flat() const noexcept { return p_; }
  double operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const;

 private:
  std::size_t d_ = 0, nx_ = 0, ny_ = 0;
  std::vector<double> p_;
};

// sum_{a,b} omega^{ak + bl} p(a,b|x,y)
cplx correlator(const CorrelationTable& t, std::size_t k, std::size_t l, std::size_t x, std::size_t y);

// p(a,b|x,y) = <psi| M_{a|x} (x) N_{b|y} (x) I |psi>. Alice acts on the leading
// factors of the state, Bob on the factors that follow; the remainder is traced.
CorrelationTable table_from_realization(const Ket& state, const std::vector<Povm>& alice,
                                        const std::vector<Povm>& bob);

}  // namespace steercert
