#include "steercert/random.hpp"

#include <cmath>

#include "steercert/error.hpp"

namespace steercert {

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (cplx& z : m.data()) z = rng.complex_normal();
  return m;
}

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix g = gaussian_matrix(n, n, rng);
  // Modified Gram-Schmidt over columns, two passes. The resulting R has a
  // positive real diagonal, which is the phase convention that makes Q Haar.
  ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> v = g.column_vector(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        cplx proj{};
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(q(r, i)) * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= proj * q(r, i);
      }
    }
    double nv = norm(v);
    if (!(nv > 1e-12)) throw DomainError("haar_unitary: degenerate Gaussian sample");
    for (std::size_t r = 0; r < n; ++r) q(r, j) = v[r] / nv;
  }
  return q;
}

Ket random_ket(std::vector<std::size_t> factor_dims, Rng& rng) {
  std::size_t n = 1;
  for (std::size_t d : factor_dims) n *= d;
  std::vector<cplx> v(n);
  for (cplx& z : v) z = rng.complex_normal();
  return Ket::normalized(std::move(v), std::move(factor_dims));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace steercert
