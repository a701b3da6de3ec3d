#pragma once

#include <cstdint>
#include <vector>

#include "steercert/ket.hpp"
#include "steercert/measurements.hpp"

namespace steercert {

struct RandomnessReport {
  std::vector<double> outcome_probs;
  double guessing_probability = 0.0;
  double min_entropy_bits = 0.0;
  bool uniform = false;
};

// Tr[I_b rho] for every outcome.
std::vector<double> outcome_distribution(const Povm& p, const DensityMatrix& rho);

// max_b Tr[I_b rho]: Eve's best product strategy outputs the modal outcome.
double guessing_probability(const Povm& p, const DensityMatrix& rho);

double min_entropy(const Povm& p, const DensityMatrix& rho);

RandomnessReport randomness_report(const Povm& p, const DensityMatrix& rho, double tol = kDefaultTol);

// Best value of sum_b Tr[I_b rho] Tr[Z_b sigma_E] over sampled Eve strategies on
// an eve_dim-dimensional space. Sample 0 is the trivial strategy that always
// outputs outcome 0; the rest draw a random mixed sigma_E and a random POVM Z.
double eve_bruteforce_oracle(const Povm& p, const DensityMatrix& rho, std::size_t samples, std::uint64_t seed,
                             std::size_t eve_dim = 2);

}  // namespace steercert
