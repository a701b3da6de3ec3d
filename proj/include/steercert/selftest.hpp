#pragma once

#include <string>
#include <vector>

#include "steercert/measurements.hpp"
#include "steercert/states.hpp"
#include "steercert/steering.hpp"

namespace steercert {

inline constexpr double kVerdictTol = 1e-7;

struct StabilizerResiduals {
  std::vector<double> per_k;  // entry k-1 for k = 1..d-1
  double s_residual = 0.0;
};

StabilizerResiduals stabilizer_residuals(const SteeringFunctional& f, const Realization& r);

// ||(B_0 B_1 - omega^{-1} B_1 B_0) sqrt(rho_B)||_F. Throws ContractError unless
// both of Bob's observables are projective within tol.
double commutation_residual(const Realization& r, double tol = kVerdictTol);
// Same quantity without the projectivity precondition.
double commutation_residual_unchecked(const Realization& r);

// Z~ = (1 + gamma) I - sum_{k>=1} delta_k Z^k
ComplexMatrix ztilde_operator(const SteeringFunctional& f);
// Eigenvalues of Z~ indexed by computational basis state l.
std::vector<double> ztilde_spectrum(const SteeringFunctional& f);

struct ProjectivityCheck {
  bool projective = false;
  double residual = 0.0;  // distance of B_1 to the nearest unitary
  ProjectivityReport detail;
};

enum class Verdict { Certified, Failed };

struct CertReport {
  std::size_t d = 0;
  double value = 0.0;
  double value_gap = 0.0;
  std::vector<double> stabilizer_residuals;
  double s_residual = 0.0;
  double commutation_residual = 0.0;
  std::vector<ProjectivityCheck> projectivity;  // one per Bob observable
  double ztilde_min_eig = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Failed;
  std::vector<std::string> failing_checks;
};

std::string to_string(Verdict v);

CertReport certify(const SteeringFunctional& f, const Realization& r, double tol = kVerdictTol);

// Unitary U_B with U_B B_0 U_B^dagger = Z_d^* (x) I and U_B B_1 U_B^dagger = X_d (x) I,
// built from the eigenvalue-1 space of B_0 and its orbit under B_1. Only
// meaningful when Bob's observables already have that block structure.
struct BobExtraction {
  bool available = false;
  ComplexMatrix u_b;
  double observable_residual = 0.0;  // max over both observables, Frobenius
  double state_residual = 0.0;       // ||U_B psi - psi(alpha) (x) xi||
};

BobExtraction extract_bob_unitary(const SteeringFunctional& f, const Realization& r);

}  // namespace steercert
