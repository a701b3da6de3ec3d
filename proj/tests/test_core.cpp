#include <doctest.h>

#include <cstdlib>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "steercert/error.hpp"
#include "steercert/ket.hpp"
#include "steercert/linalg.hpp"
#include "steercert/parallel.hpp"
#include "steercert/random.hpp"

using namespace steercert;

namespace {

const ComplexMatrix kX2{{0, 1}, {1, 0}};
const ComplexMatrix kZ2{{1, 0}, {0, -1}};

ComplexMatrix shift3() {
  ComplexMatrix x(3, 3);
  for (std::size_t j = 0; j < 3; ++j) x((j + 1) % 3, j) = 1.0;
  return x;
}

}  // namespace

TEST_SUITE("complex_matrix") {
  TEST_CASE("construction validates entries") {
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), SizeError);
    CHECK_THROWS_AS(ComplexMatrix(1, 1, {cplx(std::nan(""), 0)}), DomainError);
    CHECK_THROWS_AS(ComplexMatrix(1, 1, {cplx(0, HUGE_VAL)}), DomainError);
    CHECK_THROWS_AS((ComplexMatrix{{1, 2}, {3}}), SizeError);
  }

  TEST_CASE("product shape mismatch") {
    CHECK_THROWS_AS(ComplexMatrix(2, 3) * ComplexMatrix(2, 3), SizeError);
    CHECK_THROWS_AS(ComplexMatrix(2, 3) + ComplexMatrix(3, 2), SizeError);
  }

  TEST_CASE("product matches naive triple loop") {
    std::mt19937_64 g(7);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u}) {
      ComplexMatrix a = oracle::random_matrix(n, n + 1, g);
      ComplexMatrix b = oracle::random_matrix(n + 1, n + 2, g);
      ComplexMatrix c(n, n + 2);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n + 2; ++j)
          for (std::size_t k = 0; k < n + 1; ++k) c(i, j) += a(i, k) * b(k, j);
      CHECK(max_abs_diff(a * b, c) < 1e-12);
    }
  }

  TEST_CASE("power and adjoint") {
    ComplexMatrix x = shift3();
    CHECK(x.power(3) == ComplexMatrix::identity(3));
    CHECK(x.power(0) == ComplexMatrix::identity(3));
    CHECK(max_abs_diff(x.power(2), x.adjoint()) == 0.0);
    ComplexMatrix m{{1, cplx(0, 2)}, {3, 4}};
    CHECK(m.adjoint()(0, 1) == cplx(3, 0));
    CHECK(m.adjoint()(1, 0) == cplx(0, -2));
    CHECK(m.trace() == cplx(5, 0));
    CHECK(m.hermiticity_residual() > 0.0);
    CHECK(kZ2.is_hermitian());
  }
}

TEST_SUITE("tensor") {
  TEST_CASE("basic products") {
    CHECK(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
    ComplexMatrix zz = tensor(kZ2, kZ2);
    std::vector<double> expect{1, -1, -1, 1};
    CHECK(zz == ComplexMatrix::diagonal(std::span<const double>(expect)));
    // X_3 (x) I_2 sends |00> to |10>, which is index 2.
    ComplexMatrix xi = tensor(shift3(), ComplexMatrix::identity(2));
    std::vector<cplx> e0(6);
    e0[0] = 1.0;
    auto out = xi.apply(e0);
    CHECK(out[2] == cplx(1.0));
    CHECK(std::abs(out[0]) == 0.0);
  }

  TEST_CASE("associativity is exact on integer matrices") {
    std::mt19937_64 g(11);
    for (int t = 0; t < 20; ++t) {
      auto a = oracle::integer_matrix(2, 3, g);
      auto b = oracle::integer_matrix(3, 2, g);
      auto c = oracle::integer_matrix(2, 2, g);
      CHECK(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)));
      CHECK(tensor(a, b) == oracle::naive_kron(a, b));
    }
  }

  TEST_CASE("mixed product property") {
    std::mt19937_64 g(12);
    auto a = oracle::random_matrix(3, 3, g), b = oracle::random_matrix(2, 2, g);
    auto c = oracle::random_matrix(3, 3, g), d = oracle::random_matrix(2, 2, g);
    CHECK(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) < 1e-12);
  }

  TEST_CASE("dimension cap") {
    CHECK_THROWS_AS(tensor(ComplexMatrix::identity(64), ComplexMatrix::identity(65)), SizeError);
    CHECK_NOTHROW(tensor(ComplexMatrix::identity(8), ComplexMatrix::identity(8), 64));
    CHECK_THROWS_AS(tensor(ComplexMatrix::identity(8), ComplexMatrix::identity(9), 64), SizeError);
  }

  TEST_CASE("list form") {
    std::vector<ComplexMatrix> fs{kX2, kZ2, shift3()};
    CHECK(tensor(fs) == tensor(tensor(kX2, kZ2), shift3()));
  }
}

TEST_SUITE("partial_trace") {
  TEST_CASE("Bell state reduces to maximally mixed") {
    const double s = 1.0 / std::sqrt(2.0);
    Ket bell({s, 0, 0, s}, {2, 2});
    std::vector<std::size_t> dims{2, 2}, keep_a{0}, keep_b{1};
    ComplexMatrix half = ComplexMatrix::identity(2) * 0.5;
    CHECK(max_abs_diff(partial_trace(bell.projector(), dims, keep_a), half) < 1e-15);
    CHECK(max_abs_diff(partial_trace(bell.projector(), dims, keep_b), half) < 1e-15);
  }

  TEST_CASE("product state and Schmidt state") {
    std::vector<std::size_t> dims{2, 2}, keep_a{0}, keep_b{1};
    ComplexMatrix p0{{1, 0}, {0, 0}};
    ComplexMatrix rho{{0.3, cplx(0.1, 0.2)}, {cplx(0.1, -0.2), 0.7}};
    CHECK(max_abs_diff(partial_trace(tensor(p0, rho), dims, keep_a), p0) < 1e-15);
    CHECK(max_abs_diff(partial_trace(tensor(p0, rho), dims, keep_b), rho) < 1e-15);
    Ket psi({std::sqrt(3.0) / 2, 0, 0, 0.5}, {2, 2});
    ComplexMatrix expect{{0.75, 0}, {0, 0.25}};
    CHECK(max_abs_diff(partial_trace(psi.projector(), dims, keep_a), expect) < 1e-15);
  }

  TEST_CASE("agrees with naive oracle and preserves trace") {
    std::mt19937_64 g(5);
    for (int t = 0; t < 25; ++t) {
      std::size_t da = 1 + g() % 4, db = 1 + g() % 4;
      auto m = oracle::random_matrix(da * db, da * db, g);
      std::vector<std::size_t> dims{da, db}, ka{0}, kb{1}, none{};
      CHECK(max_abs_diff(partial_trace(m, dims, ka), oracle::naive_trace_b(m, da, db)) < 1e-12);
      CHECK(max_abs_diff(partial_trace(m, dims, kb), oracle::naive_trace_a(m, da, db)) < 1e-12);
      CHECK(std::abs(partial_trace(m, dims, ka).trace() - m.trace()) < 1e-12);
      auto scalar = partial_trace(m, dims, none);
      CHECK(scalar.rows() == 1);
      CHECK(std::abs(scalar(0, 0) - m.trace()) < 1e-12);
    }
  }

  TEST_CASE("three factors keeping the middle") {
    std::mt19937_64 g(6);
    auto a = oracle::random_matrix(2, 2, g), b = oracle::random_matrix(3, 3, g), c = oracle::random_matrix(2, 2, g);
    std::vector<std::size_t> dims{2, 3, 2}, keep{1}, keep_ac{0, 2};
    auto m = tensor(tensor(a, b), c);
    CHECK(max_abs_diff(partial_trace(m, dims, keep), b * (a.trace() * c.trace())) < 1e-12);
    CHECK(max_abs_diff(partial_trace(m, dims, keep_ac), tensor(a, c) * b.trace()) < 1e-12);
  }

  TEST_CASE("invalid keep lists") {
    auto m = ComplexMatrix::identity(4);
    std::vector<std::size_t> dims{2, 2}, bad{2}, dup{0, 0}, wrong_dims{2, 3}, keep{0};
    CHECK_THROWS_AS(partial_trace(m, dims, bad), IndexError);
    CHECK_THROWS_AS(partial_trace(m, dims, dup), IndexError);
    CHECK_THROWS_AS(partial_trace(m, wrong_dims, keep), SizeError);
  }

  TEST_CASE("reduced_density matches projector route") {
    Rng rng(9);
    Ket psi = random_ket({2, 3, 2}, rng);
    std::vector<std::size_t> dims{2, 3, 2};
    for (std::vector<std::size_t> keep : {std::vector<std::size_t>{0}, {1}, {0, 1}, {1, 2}, {0, 2}}) {
      CHECK(max_abs_diff(reduced_density(psi, keep), partial_trace(psi.projector(), dims, keep)) < 1e-13);
    }
  }

  TEST_CASE("embed and apply_on_factor") {
    Rng rng(10);
    Ket psi = random_ket({2, 3, 2}, rng);
    std::vector<std::size_t> dims{2, 3, 2};
    ComplexMatrix big = embed(shift3(), dims, 1);
    CHECK(big == tensor(tensor(ComplexMatrix::identity(2), shift3()), ComplexMatrix::identity(2)));
    auto direct = big.apply(psi.amplitudes());
    auto fast = apply_on_factor(shift3(), psi.amplitudes(), dims, 1);
    double diff = 0;
    for (std::size_t i = 0; i < direct.size(); ++i) diff = std::max(diff, std::abs(direct[i] - fast[i]));
    CHECK(diff < 1e-14);
  }
}

TEST_SUITE("eigen") {
  TEST_CASE("small exact spectra") {
    auto z = hermitian_eig(kZ2);
    CHECK(z.values[0] == doctest::Approx(1.0));
    CHECK(z.values[1] == doctest::Approx(-1.0));
    Ket k = Ket::normalized({1, 1, 0}, {3});
    auto p = hermitian_eig(k.projector());
    CHECK(p.values[0] == doctest::Approx(1.0));
    CHECK(std::abs(p.values[1]) < 1e-12);
    CHECK(std::abs(p.values[2]) < 1e-12);
  }

  TEST_CASE("random Hermitian spectra against independent solver") {
    std::mt19937_64 g(21);
    for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 33u, 64u}) {
      auto m = oracle::random_hermitian(n, g);
      auto r = hermitian_eig(m);
      auto ref = oracle::eigenvalues_desc(m);
      double sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(r.values[i] - ref[i]) < 1e-9);
        if (i > 0) CHECK(r.values[i] <= r.values[i - 1]);
        sum += r.values[i];
      }
      CHECK(std::abs(sum - m.trace().real()) < 1e-9);
      std::vector<double> lam = r.values;
      auto rebuilt = r.vectors * ComplexMatrix::diagonal(std::span<const double>(lam)) * r.vectors.adjoint();
      CHECK(frobenius_distance(rebuilt, m) <= 1e-9 * std::max(1.0, m.frobenius_norm()));
    }
  }

  TEST_CASE("degenerate eigenvectors are canonical") {
    auto id = hermitian_eig(ComplexMatrix::identity(4));
    CHECK(max_abs_diff(id.vectors, ComplexMatrix::identity(4)) < 1e-14);
    std::mt19937_64 g(3);
    auto u = oracle::random_unitary(4, g);
    std::vector<double> lam{2, 2, -1, -1};
    auto m = u * ComplexMatrix::diagonal(std::span<const double>(lam)) * u.adjoint();
    auto a = hermitian_eig(m);
    auto b = hermitian_eig(m);
    CHECK(a.vectors == b.vectors);
    for (std::size_t c = 0; c < 4; ++c) {
      auto v = a.vectors.column_vector(c);
      for (auto z : v) {
        if (std::abs(z) > 1e-8) {
          CHECK(std::abs(z.imag()) < 1e-12);
          CHECK(z.real() > 0);
          break;
        }
      }
    }
  }

  TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m{{1, 2}, {0, 1}};
    CHECK_THROWS_AS(hermitian_eig(m), ContractError);
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), SizeError);
  }

  TEST_CASE("svd, polar, square roots") {
    std::mt19937_64 g(4);
    auto m = oracle::random_matrix(5, 5, g);
    auto s = svd(m);
    std::vector<double> sv = s.s;
    auto rebuilt = s.u * ComplexMatrix::diagonal(std::span<const double>(sv)) * s.v.adjoint();
    CHECK(max_abs_diff(rebuilt, m) < 1e-12);
    auto u = oracle::random_unitary(4, g);
    CHECK(max_abs_diff(polar_unitary(u), u) < 1e-12);
    CHECK(unitarity_residual(u) < 1e-12);
    CHECK(unitarity_residual(u * 0.99) == doctest::Approx(0.01 * 2.0).epsilon(1e-9));
    auto psd = m * m.adjoint();
    auto r = sqrt_psd(psd);
    CHECK(max_abs_diff(r * r, psd) < 1e-10);
    auto is = inverse_sqrt_psd(psd);
    CHECK(max_abs_diff(is * psd * is, ComplexMatrix::identity(5)) < 1e-9);
    CHECK(numerical_rank(tensor(kZ2, ComplexMatrix::outer(std::vector<cplx>{1, 0}, std::vector<cplx>{1, 0}))) == 2);
    CHECK(operator_norm(kZ2 * 3.0) == doctest::Approx(3.0));
  }
}

TEST_SUITE("ket") {
  TEST_CASE("normalization contract") {
    CHECK_THROWS_AS(Ket({1, 1}), DomainError);
    CHECK_NOTHROW(Ket({1, 0}));
    CHECK_THROWS_AS(Ket::normalized({0, 0}, {2}), DomainError);
    CHECK_THROWS_AS(Ket({1, 0, 0}, {2, 2}), SizeError);
    Ket k = Ket::normalized({3, cplx(0, 4)}, {2});
    CHECK(norm(k.amplitudes()) == doctest::Approx(1.0));
  }

  TEST_CASE("density matrix contract") {
    CHECK_NOTHROW(DensityMatrix(ComplexMatrix::identity(2) * 0.5));
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::identity(2)), DomainError);
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{1.5, 0}, {0, -0.5}}), DomainError);
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{0.5, 1}, {0, 0.5}}), DomainError);
  }

  TEST_CASE("tensor of kets and expectations") {
    Ket a = Ket::basis(2, 1), b = Ket::basis(3, 2);
    Ket ab = tensor(a, b);
    CHECK(ab.dim() == 6);
    CHECK(ab[5] == cplx(1.0));
    CHECK(ab.factor_dims() == std::vector<std::size_t>{2, 3});
    CHECK(expectation(a, kZ2) == cplx(-1.0));
    CHECK(std::abs(local_expectation(ab, kZ2, ComplexMatrix::identity(3)) - cplx(-1.0)) < 1e-15);
  }
}

TEST_SUITE("random") {
  TEST_CASE("seeded reproducibility") {
    Rng a(42), b(42);
    CHECK(haar_unitary(5, a) == haar_unitary(5, b));
    CHECK(random_ket({3, 2}, a).vec() == random_ket({3, 2}, b).vec());
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  }

  TEST_CASE("Haar unitaries are unitary") {
    Rng r(1);
    for (std::size_t n : {1u, 2u, 5u, 12u}) {
      auto u = haar_unitary(n, r);
      CHECK(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(n)) < 1e-12);
    }
  }
}

TEST_SUITE("parallel") {
  TEST_CASE("results are keyed by index") {
    std::vector<std::size_t> out(1000);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = i * i; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  }

  TEST_CASE("exceptions propagate") {
    CHECK_THROWS_AS(parallel_for(50,
                                 [](std::size_t i) {
                                   if (i == 17) throw DomainError("boom");
                                 }),
                    DomainError);
  }

  TEST_CASE("thread count honours the environment") {
    ::setenv("STEERCERT_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    ::setenv("STEERCERT_THREADS", "1", 1);
    CHECK(thread_count() == 1);
    ::unsetenv("STEERCERT_THREADS");
    CHECK(thread_count() >= 1);
  }
}
