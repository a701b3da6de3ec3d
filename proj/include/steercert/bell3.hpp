#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/states.hpp"

namespace steercert {

struct BellFunctional3 {
  std::array<cplx, 3> lambda;

  BellFunctional3();
  // 6 sqrt(3) cos(pi/9)
  static double threshold();
};

// sum_{k=1,2} sum_{x,y} lambda_k omega^{kxy} <A_x^k (x) B_y^k>. Needs three
// settings per party with three outcomes.
double bell_value(const Realization& r);
cplx bell_value_complex(const Realization& r);

// Dense Bell operator for 3x3 observables on a qutrit pair.
ComplexMatrix bell_operator(const std::vector<ComplexMatrix>& alice, const std::vector<ComplexMatrix>& bob);

struct SeesawResult {
  double value = 0.0;
  Realization realization;
  std::vector<double> state_schmidt;  // descending
  std::size_t iterations = 0;         // sweeps used by the winning restart
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  std::vector<double> history;  // winning restart, value after each state update
};

// Alternates the optimal state (top eigenvector) with monotone updates of each
// observable's eigenbasis, keeping the spectrum fixed at (1, omega, omega^2).
// Restarts are independent; the best value wins, ties going to the lowest index.
SeesawResult seesaw_optimize(std::uint64_t seed, std::size_t restarts, std::size_t iters);

struct DressedAlice {
  std::size_t aux_dim = 0;
  std::size_t q_rank = 0;
  ComplexMatrix q;  // projector on the aux factor
  ComplexMatrix a0;  // Z_3 (x) I
  ComplexMatrix a1;  // X_3 (x) Q + X_3^T (x) Q_perp
};

DressedAlice dressed_alice(std::size_t aux_dim, std::size_t q_rank);

struct ExtendedReport {
  double value = 0.0;
  double value_gap = 0.0;
  double lhs_exact = 0.0;
  double weight = 1.0;
  bool passed = false;
  std::vector<std::string> failing_checks;
};

// Pairs Alice's dressed observables with Bob measuring Z_3^* and X_3 (x) Q +
// X_3^dagger (x) Q_perp on psi(alpha) (x) (sqrt(w)|00> + sqrt(1-w)|11>).
// break_branch replaces Bob's X_3^dagger branch by X_3.
Realization extended_realization(const SchmidtVector& sv, const DressedAlice& da, std::uint64_t seed,
                                 bool break_branch = false, double* weight_out = nullptr);

ExtendedReport extended_certification_check(const SchmidtVector& sv, const DressedAlice& da, std::uint64_t seed,
                                            bool break_branch = false);

}  // namespace steercert
