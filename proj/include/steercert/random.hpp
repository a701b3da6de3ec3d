#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/ket.hpp"

namespace steercert {

// Seeded generator. mt19937_64 is the fixed algorithm; construct one per call
// site and never share it across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }
  std::uint64_t next_u64() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

// Haar unitary: Gram-Schmidt (QR) of a complex Gaussian matrix with the R
// diagonal made real positive.
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);

// Uniformly random unit vector.
Ket random_ket(std::vector<std::size_t> factor_dims, Rng& rng);

// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace steercert
