#include "steercert/randomness.hpp"

#include <algorithm>
#include <cmath>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/parallel.hpp"
#include "steercert/random.hpp"

namespace steercert {

std::vector<double> outcome_distribution(const Povm& p, const DensityMatrix& rho) {
  if (p.dim() != rho.dim()) throw SizeError("outcome_distribution: POVM and state dimensions differ");
  std::vector<double> probs;
  probs.reserve(p.size());
  for (const auto& e : p.elements()) probs.push_back((e * rho.matrix()).trace().real());
  return probs;
}

double guessing_probability(const Povm& p, const DensityMatrix& rho) {
  std::vector<double> probs = outcome_distribution(p, rho);
  return *std::max_element(probs.begin(), probs.end());
}

double min_entropy(const Povm& p, const DensityMatrix& rho) { return -std::log2(guessing_probability(p, rho)); }

RandomnessReport randomness_report(const Povm& p, const DensityMatrix& rho, double tol) {
  RandomnessReport r;
  r.outcome_probs = outcome_distribution(p, rho);
  r.guessing_probability = *std::max_element(r.outcome_probs.begin(), r.outcome_probs.end());
  r.min_entropy_bits = -std::log2(r.guessing_probability);
  const double target = 1.0 / static_cast<double>(p.size());
  r.uniform = std::all_of(r.outcome_probs.begin(), r.outcome_probs.end(),
                          [&](double v) { return std::abs(v - target) <= tol; });
  return r;
}

double eve_bruteforce_oracle(const Povm& p, const DensityMatrix& rho, std::size_t samples, std::uint64_t seed,
                             std::size_t eve_dim) {
  if (samples < 1) throw DomainError("eve_bruteforce_oracle: samples must be >= 1");
  if (eve_dim < 1) throw DomainError("eve_bruteforce_oracle: eve_dim must be >= 1");
  const std::vector<double> probs = outcome_distribution(p, rho);
  const std::size_t n = p.size();

  std::vector<double> best(samples, 0.0);
  parallel_for(samples, [&](std::size_t s) {
    if (s == 0) {
      best[0] = probs[0];
      return;
    }
    Rng rng(derive_seed(seed, s));
    // sigma_E: reduced state of a random pure state on E (x) E
    Ket purified = random_ket({eve_dim, eve_dim}, rng);
    const std::size_t keep[] = {0};
    ComplexMatrix sigma = reduced_density(purified, keep);
    // Z_b = S^{-1/2} G_b^dagger G_b S^{-1/2}
    std::vector<ComplexMatrix> z;
    ComplexMatrix total(eve_dim, eve_dim);
    for (std::size_t b = 0; b < n; ++b) {
      ComplexMatrix g = gaussian_matrix(eve_dim, eve_dim, rng);
      z.push_back(g.adjoint() * g);
      total += z.back();
    }
    ComplexMatrix s_inv = inverse_sqrt_psd(total);
    double value = 0.0;
    for (std::size_t b = 0; b < n; ++b) value += probs[b] * (s_inv * z[b] * s_inv * sigma).trace().real();
    best[s] = value;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace steercert
