#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/measurements.hpp"
#include "steercert/random.hpp"
#include "steercert/states.hpp"

using namespace steercert;

namespace {

Povm basis_povm(const ComplexMatrix& u) {
  std::vector<ComplexMatrix> el;
  for (std::size_t a = 0; a < u.rows(); ++a) {
    auto v = u.column_vector(a);
    el.push_back(ComplexMatrix::outer(v, v));
  }
  return Povm(el);
}

// Random d-outcome POVM from Gaussian positive parts normalized by S^{-1/2}.
Povm random_povm(std::size_t d, std::size_t dim, Rng& rng) {
  std::vector<ComplexMatrix> g;
  ComplexMatrix s(dim, dim);
  for (std::size_t a = 0; a < d; ++a) {
    auto m = gaussian_matrix(dim, dim, rng);
    g.push_back(m.adjoint() * m);
    s += g.back();
  }
  auto is = inverse_sqrt_psd(s);
  std::vector<ComplexMatrix> el;
  for (auto& x : g) el.push_back(is * x * is);
  return Povm(el);
}

}  // namespace

TEST_SUITE("pauli") {
  TEST_CASE("small cases") {
    CHECK(generalized_pauli(2, PauliKind::Z) == (ComplexMatrix{{1, 0}, {0, -1}}));
    auto z3 = generalized_pauli(3, PauliKind::Z);
    CHECK(std::abs(z3(1, 1) - oracle::omega(3, 1)) < 1e-15);
    CHECK(std::abs(z3(2, 2) - oracle::omega(3, 2)) < 1e-15);
    auto x3 = generalized_pauli(3, PauliKind::X);
    std::vector<cplx> e2{0, 0, 1};
    auto out = x3.apply(e2);
    CHECK(out[0] == cplx(1.0));
    CHECK_THROWS_AS(generalized_pauli(1, PauliKind::X), DomainError);
    CHECK_THROWS_AS(generalized_pauli(0, PauliKind::Z), DomainError);
  }

  TEST_CASE("commutation and unitarity for d up to 8") {
    for (std::size_t d = 2; d <= 8; ++d) {
      auto z = generalized_pauli(d, PauliKind::Z), x = generalized_pauli(d, PauliKind::X);
      CHECK(max_abs_diff(z * x, x * z * omega_pow(d, 1)) < 1e-14);
      CHECK(max_abs_diff(z.power(d), ComplexMatrix::identity(d)) < 1e-13);
      CHECK(x.power(d) == ComplexMatrix::identity(d));
      CHECK(unitarity_residual(z) < 1e-14);
      CHECK(weyl_operator(d, 1, 1) == x * z);
    }
  }

  TEST_CASE("omega powers reduce modulo d") {
    CHECK(omega_pow(4, 1) == cplx(0, 1));
    CHECK(omega_pow(4, -1) == cplx(0, -1));
    CHECK(omega_pow(2, 3) == cplx(-1, 0));
    CHECK(omega_pow(5, 7) == omega_pow(5, 2));
  }
}

TEST_SUITE("fourier") {
  TEST_CASE("named examples") {
    auto b = povm_to_observable(basis_povm(ComplexMatrix::identity(2)));
    CHECK(max_abs_diff(b[1], generalized_pauli(2, PauliKind::Z)) < 1e-15);
    CHECK(max_abs_diff(b[0], ComplexMatrix::identity(2)) < 1e-15);

    std::vector<ComplexMatrix> flat(3, ComplexMatrix::identity(3) * (1.0 / 3.0));
    auto u = povm_to_observable(Povm(flat));
    CHECK(u[1].frobenius_norm() < 1e-15);
    CHECK(u[2].frobenius_norm() < 1e-15);

    auto zero = ComplexMatrix(3, 3);
    GeneralizedObservable g0({ComplexMatrix::identity(3), zero, zero});
    auto back = observable_to_povm(g0);
    for (std::size_t a = 0; a < 3; ++a) CHECK(max_abs_diff(back[a], flat[a]) < 1e-15);

    auto p = observable_to_povm(GeneralizedObservable::from_unitary(generalized_pauli(2, PauliKind::Z), 2));
    CHECK(max_abs_diff(p[0], ComplexMatrix{{1, 0}, {0, 0}}) < 1e-15);
    CHECK(max_abs_diff(p[1], ComplexMatrix{{0, 0}, {0, 1}}) < 1e-15);
  }

  TEST_CASE("X_3 yields Fourier basis projectors") {
    auto p = observable_to_povm(GeneralizedObservable::from_unitary(generalized_pauli(3, PauliKind::X), 3));
    for (std::size_t a = 0; a < 3; ++a) {
      // |f_a> = (1/sqrt3) sum_j omega^{-a j}|j> has X|f_a> = omega^a |f_a>.
      std::vector<cplx> f(3);
      for (std::size_t j = 0; j < 3; ++j) f[j] = oracle::omega(3, -static_cast<long long>(a * j)) / std::sqrt(3.0);
      CHECK(max_abs_diff(p[a], ComplexMatrix::outer(f, f)) < 1e-14);
    }
  }

  TEST_CASE("round trip on 200 random POVMs") {
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
      std::size_t d = 2 + static_cast<std::size_t>(t % 5);
      std::size_t dim = 1 + static_cast<std::size_t>(rng.next_u64() % 4);
      Povm p = random_povm(d, dim, rng);
      auto g = povm_to_observable(p);
      CHECK(max_abs_diff(g[0], ComplexMatrix::identity(dim)) < 1e-12);
      auto q = observable_to_povm(g);
      for (std::size_t a = 0; a < d; ++a) CHECK(max_abs_diff(p[a], q[a]) < 1e-12);
    }
  }

  TEST_CASE("mismatched outcome counts are rejected") {
    std::vector<ComplexMatrix> one{ComplexMatrix::identity(2)};
    CHECK_THROWS_AS(povm_to_observable(Povm(one)), DomainError);
    std::vector<ComplexMatrix> mixed{ComplexMatrix::identity(2), ComplexMatrix::identity(3)};
    CHECK_THROWS_AS(Povm{mixed}, SizeError);
  }

  TEST_CASE("observable contract") {
    auto z = generalized_pauli(3, PauliKind::Z);
    CHECK_THROWS_AS(GeneralizedObservable({ComplexMatrix::identity(3) * 2.0, z, z.adjoint()}), InvalidObservableError);
    CHECK_THROWS_AS(GeneralizedObservable({ComplexMatrix::identity(3), z, z}), InvalidObservableError);
    CHECK_THROWS_AS(GeneralizedObservable({ComplexMatrix::identity(3), z * 1.5, z.adjoint() * 1.5}),
                    InvalidObservableError);
  }

  TEST_CASE("strongly negative elements throw") {
    // B_1 = -I/2 ... B_{d-1}: with d=2 a Hermitian B_1 of norm 1 always gives valid N.
    // A d=3 pair with B_1 = B_2 = I gives N_1 = N_2 = 0 and N_0 = I, fine; B_1 = B_2 = -I gives N_0 = -I/3.
    auto i3 = ComplexMatrix::identity(3);
    GeneralizedObservable bad({i3, i3 * -1.0, i3 * -1.0});
    CHECK_THROWS_AS(observable_to_povm(bad), InvalidObservableError);
  }
}

TEST_SUITE("projectivity") {
  TEST_CASE("examples") {
    auto z3 = generalized_pauli(3, PauliKind::Z);
    CHECK(is_projective(GeneralizedObservable::from_unitary(z3, 3), 1e-9).projective);
    auto zero = ComplexMatrix(3, 3);
    auto r0 = is_projective(GeneralizedObservable({ComplexMatrix::identity(3), zero, zero}), 1e-9);
    CHECK_FALSE(r0.projective);
    auto zs = z3 * 0.99;
    auto r = is_projective(GeneralizedObservable({ComplexMatrix::identity(3), zs, zs.adjoint()}), 1e-9);
    CHECK_FALSE(r.projective);
    CHECK(r.unitarity_residual == doctest::Approx(0.01 * std::sqrt(3.0)).epsilon(1e-9));
  }

  TEST_CASE("random rank-one projective measurements") {
    std::mt19937_64 g(8);
    for (int t = 0; t < 50; ++t) {
      std::size_t d = 2 + static_cast<std::size_t>(t % 5);
      auto u = oracle::random_unitary(d, g);
      auto obs = povm_to_observable(basis_povm(u));
      auto rep = is_projective(obs, 1e-9);
      CHECK(rep.projective);
      for (std::size_t k = 1; k < d; ++k) CHECK(std::abs(operator_norm(obs[k]) - 1.0) < 1e-9);
    }
  }
}

TEST_SUITE("correlations") {
  TEST_CASE("table contract") {
    CHECK_THROWS_AS(CorrelationTable(2, 1, 1, {0.5, 0.5, 0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(CorrelationTable(2, 1, 1, {1.2, -0.2, 0, 0}), DomainError);
    CHECK_THROWS_AS(CorrelationTable(2, 1, 1, {1, 0, 0}), SizeError);
    CorrelationTable t(2, 1, 1, {0.5, 0, 0, 0.5});
    CHECK(t(0, 0, 0, 0) == 0.5);
    CHECK_THROWS_AS(correlator(t, 2, 0, 0, 0), IndexError);
    CHECK_THROWS_AS(correlator(t, 0, 0, 1, 0), IndexError);
  }

  TEST_CASE("Bell state correlations") {
    auto sv = SchmidtVector::uniform(2);
    Ket psi = schmidt_state(sv);
    std::vector<Povm> a{basis_povm(ComplexMatrix::identity(2))}, b = a;
    auto t = table_from_realization(psi, a, b);
    CHECK(t(0, 0, 0, 0) == doctest::Approx(0.5));
    CHECK(t(1, 1, 0, 0) == doctest::Approx(0.5));
    CHECK(std::abs(t(0, 1, 0, 0)) < 1e-15);
    CHECK(std::abs(correlator(t, 1, 1, 0, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(correlator(t, 0, 0, 0, 0) - cplx(1.0)) < 1e-12);
  }

  TEST_CASE("product and Schmidt states") {
    Ket prod({1, 0, 0, 0}, {2, 2});
    std::vector<Povm> comp{basis_povm(ComplexMatrix::identity(2))};
    CHECK(table_from_realization(prod, comp, comp)(0, 0, 0, 0) == doctest::Approx(1.0));
    Ket psi = schmidt_state(SchmidtVector({std::sqrt(3.0) / 2, 0.5}));
    auto t = table_from_realization(psi, comp, comp);
    CHECK(t(0, 0, 0, 0) == doctest::Approx(0.75));
    CHECK(t(1, 1, 0, 0) == doctest::Approx(0.25));
    std::vector<Povm> wrong{basis_povm(ComplexMatrix::identity(3))};
    CHECK_THROWS_AS(table_from_realization(psi, wrong, comp), SizeError);
  }

  TEST_CASE("flat table has vanishing correlators") {
    CorrelationTable t(3, 1, 1, std::vector<double>(9, 1.0 / 9.0));
    CHECK(std::abs(correlator(t, 1, 0, 0, 0)) < 1e-15);
  }

  TEST_CASE("conjugate symmetry and modulus bound") {
    Rng rng(3);
    for (std::size_t d = 2; d <= 5; ++d) {
      Ket psi = random_ket({d, d, 2}, rng);
      std::vector<Povm> a{random_povm(d, d, rng), random_povm(d, d, rng)};
      std::vector<Povm> b{random_povm(d, d, rng), random_povm(d, d, rng)};
      auto t = table_from_realization(psi, a, b);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) {
              auto c = correlator(t, k, l, x, y);
              auto cc = correlator(t, (d - k) % d, (d - l) % d, x, y);
              CHECK(std::abs(c - std::conj(cc)) < 1e-12);
              CHECK(std::abs(c) <= 1.0 + 1e-9);
            }
      for (double p : t.flat()) CHECK(p >= -1e-12);
    }
  }
}
