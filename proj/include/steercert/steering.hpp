#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/states.hpp"

namespace steercert {

struct SteeringFunctional {
  std::size_t d = 0;
  SchmidtVector alpha = SchmidtVector::uniform(2);
  double gamma = 0.0;
  std::vector<cplx> delta;  // delta[0] = -1
};

enum class LhsMethod { ExactEigen, PaperUpper };

std::string to_string(LhsMethod m);

struct LhsOptimum {
  double value = 0.0;
  LhsMethod method = LhsMethod::ExactEigen;
  // ExactEigen: Bob's deterministic outcomes for settings 0 and 1.
  std::size_t b0 = 0, b1 = 0;
  // PaperUpper: maximizer on the nonnegative unit sphere, and its branch.
  std::vector<double> eta;
  std::size_t branch = 0;
};

SteeringFunctional functional_coefficients(const SchmidtVector& sv);

// sum_{k=1}^{d-1} [A_0^k (x) B_{k|0} + gamma A_1^k (x) B_{k|1} + delta_k A_0^k (x) I] (x) I_E
ComplexMatrix steering_operator(const SteeringFunctional& f, const Realization& r);

// <psi| steering operator |psi>, computed without forming the operator.
double evaluate(const SteeringFunctional& f, const Realization& r);

// Maximum over Bob's d^2 deterministic responses of the largest eigenvalue of
// Alice's effective operator. Ties resolve to the lexicographically first
// (b0, b1).
LhsOptimum lhs_bound_exact(const SteeringFunctional& f);
LhsOptimum lhs_bound_exact(const SteeringFunctional& f, const ComplexMatrix& a0, const ComplexMatrix& a1);

// Alice's effective operator for the deterministic response (b0, b1).
ComplexMatrix lhs_operator(const SteeringFunctional& f, const ComplexMatrix& a0, const ComplexMatrix& a1,
                           std::size_t b0, std::size_t b1);

// g(eta) = d max_a eta_a^2 + gamma [(sum eta)^2 - sum_i alpha_i sum_a eta_a^2 / alpha_a]
double paper_objective(const SteeringFunctional& f, const std::vector<double>& eta);

// Maximizes paper_objective over the nonnegative unit sphere, one branch per
// fixed argmax index, by projected-gradient ascent from seeded multi-starts.
LhsOptimum lhs_bound_paper_upper(const SteeringFunctional& f, std::size_t restarts = 32, std::uint64_t seed = 42);

struct ViolationGap {
  double beta_q = 0.0;
  double beta_l = 0.0;
  double gap = 0.0;
};

ViolationGap violation_gap(const SteeringFunctional& f);

}  // namespace steercert
