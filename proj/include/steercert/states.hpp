#pragma once

#include <cstdint>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/ket.hpp"
#include "steercert/measurements.hpp"

namespace steercert {

// Positive Schmidt coefficients with unit Euclidean norm.
class SchmidtVector {
 public:
  // Norm deviations up to 1e-6 are renormalized; larger ones throw DomainError.
  explicit SchmidtVector(std::vector<double> alpha);

  // Rescales any positive vector to unit norm.
  static SchmidtVector normalized(std::vector<double> alpha);
  static SchmidtVector uniform(std::size_t d);

  std::size_t d() const noexcept { return alpha_.size(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double operator[](std::size_t i) const { return alpha_[i]; }

 private:
  struct Unchecked {};
  SchmidtVector(std::vector<double> alpha, Unchecked) : alpha_(std::move(alpha)) {}
  std::vector<double> alpha_;
};

// Joint state on (A, B, E) plus the measurements of each party. Alice's
// observables are unitaries with A^d = I; Bob's are in the Fourier picture.
struct Realization {
  Ket state;
  std::vector<ComplexMatrix> alice;
  std::vector<GeneralizedObservable> bob;

  std::size_t d() const { return bob.empty() ? 0 : bob[0].outcomes(); }
  std::size_t dim_a() const { return state.factor_dims().at(0); }
  std::size_t dim_b() const { return state.factor_dims().at(1); }
  std::size_t dim_e() const { return state.factor_dims().at(2); }
};

// Checks the three-factor layout, operator shapes, and that every Alice
// observable is unitary with A^d = I. Throws SizeError or DomainError.
void validate_realization(const Realization& r, double tol = kDefaultTol);

// sum_i alpha_i |i>|i> on factors (d, d)
Ket schmidt_state(const SchmidtVector& sv);

// Schmidt state on (d, d, 1); A_0 = Z_d, A_1 = X_d; Bob measures Z_d^* and X_d.
Realization ideal_realization(const SchmidtVector& sv);

// Appends a seeded junk state |xi> on B'' (x) E and, when apply_unitary is
// set, conjugates Bob's whole space by a seeded Haar unitary. The junk state
// is phase-fixed, so junk_dim_b = eve_dim = 1 without the unitary returns the
// input unchanged.
Realization dress_realization(const Realization& r, std::size_t junk_dim_b, std::size_t eve_dim, std::uint64_t seed,
                              bool apply_unitary = true);

// Same state with Bob's observables and Bob's factor of the state conjugated by u.
Realization conjugate_bob(const Realization& r, const ComplexMatrix& u);

}  // namespace steercert
