#include "steercert/bell3.hpp"

#include <cmath>
#include <numbers>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/measurements.hpp"
#include "steercert/parallel.hpp"
#include "steercert/random.hpp"
#include "steercert/steering.hpp"

namespace steercert {

namespace {

constexpr std::size_t kD = 3;

ComplexMatrix spectrum_diag() {
  ComplexMatrix m(kD, kD);
  for (std::size_t a = 0; a < kD; ++a) m(a, a) = omega_pow(kD, static_cast<long long>(a));
  return m;
}

ComplexMatrix from_basis(const ComplexMatrix& v) { return v * spectrum_diag() * v.adjoint(); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

// F[i][j] = sum_{b,c} rho[(i,b),(j,c)] m[c][b], so Tr[A F] = <A (x) m>.
ComplexMatrix contract_bob(const ComplexMatrix& rho, const ComplexMatrix& m) {
  ComplexMatrix f(kD, kD);
  for (std::size_t i = 0; i < kD; ++i)
    for (std::size_t j = 0; j < kD; ++j) {
      cplx acc{};
      for (std::size_t b = 0; b < kD; ++b)
        for (std::size_t c = 0; c < kD; ++c) acc += rho(i * kD + b, j * kD + c) * m(c, b);
      f(i, j) = acc;
    }
  return f;
}

// F[b][c] = sum_{i,j} rho[(i,b),(j,c)] m[j][i], so Tr[B F] = <m (x) B>.
ComplexMatrix contract_alice(const ComplexMatrix& rho, const ComplexMatrix& m) {
  ComplexMatrix f(kD, kD);
  for (std::size_t b = 0; b < kD; ++b)
    for (std::size_t c = 0; c < kD; ++c) {
      cplx acc{};
      for (std::size_t i = 0; i < kD; ++i)
        for (std::size_t j = 0; j < kD; ++j) acc += rho(i * kD + b, j * kD + c) * m(j, i);
      f(b, c) = acc;
    }
  return f;
}

// Given F_k with the local objective sum_k Tr[U^k F_k], returns the eigenbasis
// update that cannot decrease it: maximize sum_a v_a^dag H_a v_a with
// H_a = Herm(sum_k omega^{ka} F_k) shifted to be positive semidefinite, and
// take one linearization step V <- polar([H_a v_a]_a).
ComplexMatrix basis_step(const ComplexMatrix& v, const std::array<ComplexMatrix, 3>& f) {
  std::array<ComplexMatrix, 3> h;
  double shift = 0.0;
  for (std::size_t a = 0; a < kD; ++a) {
    ComplexMatrix g(kD, kD);
    for (std::size_t k = 1; k < kD; ++k) g += omega_pow(kD, static_cast<long long>(k * a)) * f[k];
    h[a] = hermitian_part(g);
    shift = std::max(shift, -hermitian_eig(h[a]).values.back());
  }
  ComplexMatrix lin(kD, kD);
  for (std::size_t a = 0; a < kD; ++a) {
    std::vector<cplx> col = v.column_vector(a);
    std::vector<cplx> hv = h[a].apply(col);
    for (std::size_t i = 0; i < kD; ++i) lin(i, a) = hv[i] + shift * col[i];
  }
  return polar_unitary(lin);
}

struct RestartOutcome {
  double value = -1e300;
  std::vector<double> history;
  ComplexMatrix state;  // 9x1
  std::array<ComplexMatrix, 3> va, vb;
};

RestartOutcome run_restart(std::uint64_t seed, std::size_t iters) {
  const BellFunctional3 fn;
  Rng rng(seed);
  RestartOutcome out;
  std::array<ComplexMatrix, 3> va, vb;
  for (auto& v : va) v = haar_unitary(kD, rng);
  for (auto& v : vb) v = haar_unitary(kD, rng);

  std::vector<ComplexMatrix> a(kD), b(kD);
  std::vector<cplx> psi;
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t x = 0; x < kD; ++x) a[x] = from_basis(va[x]);
    for (std::size_t y = 0; y < kD; ++y) b[y] = from_basis(vb[y]);
    EigResult e = hermitian_eig(bell_operator(a, b), 1e-8);
    double value = e.values.front();
    psi = e.vectors.column_vector(0);
    bool stalled = !out.history.empty() && value - out.history.back() < 1e-14;
    out.history.push_back(value);
    out.value = value;
    out.va = va;
    out.vb = vb;
    out.state = ComplexMatrix::column(psi);
    if (stalled) break;

    ComplexMatrix rho = ComplexMatrix::outer(psi, psi);
    for (std::size_t x = 0; x < kD; ++x) {
      std::array<ComplexMatrix, 3> f{ComplexMatrix(kD, kD), ComplexMatrix(kD, kD), ComplexMatrix(kD, kD)};
      for (std::size_t k = 1; k < kD; ++k)
        for (std::size_t y = 0; y < kD; ++y)
          f[k] += (fn.lambda[k] * omega_pow(kD, static_cast<long long>(k * x * y))) * contract_bob(rho, b[y].power(static_cast<unsigned>(k)));
      va[x] = basis_step(va[x], f);
    }
    for (std::size_t x = 0; x < kD; ++x) a[x] = from_basis(va[x]);
    for (std::size_t y = 0; y < kD; ++y) {
      std::array<ComplexMatrix, 3> f{ComplexMatrix(kD, kD), ComplexMatrix(kD, kD), ComplexMatrix(kD, kD)};
      for (std::size_t k = 1; k < kD; ++k)
        for (std::size_t x = 0; x < kD; ++x)
          f[k] += (fn.lambda[k] * omega_pow(kD, static_cast<long long>(k * x * y))) * contract_alice(rho, a[x].power(static_cast<unsigned>(k)));
      vb[y] = basis_step(vb[y], f);
    }
  }
  return out;
}

}  // namespace

BellFunctional3::BellFunctional3() {
  lambda[0] = 1.0;
  lambda[1] = std::polar(1.0, -std::numbers::pi / 18.0);
  lambda[2] = std::conj(lambda[1]);
}

double BellFunctional3::threshold() { return 6.0 * std::sqrt(3.0) * std::cos(std::numbers::pi / 9.0); }

cplx bell_value_complex(const Realization& r) {
  if (r.alice.size() != kD || r.bob.size() != kD || r.d() != kD) {
    throw SizeError("bell_value: need three settings per party with three outcomes");
  }
  const BellFunctional3 fn;
  cplx acc{};
  for (std::size_t x = 0; x < kD; ++x) {
    ComplexMatrix ak = ComplexMatrix::identity(r.dim_a());
    for (std::size_t k = 1; k < kD; ++k) {
      ak = ak * r.alice[x];
      for (std::size_t y = 0; y < kD; ++y)
        acc += fn.lambda[k] * omega_pow(kD, static_cast<long long>(k * x * y)) * local_expectation(r.state, ak, r.bob[y][k]);
    }
  }
  return acc;
}

double bell_value(const Realization& r) { return bell_value_complex(r).real(); }

ComplexMatrix bell_operator(const std::vector<ComplexMatrix>& alice, const std::vector<ComplexMatrix>& bob) {
  if (alice.size() != kD || bob.size() != kD) throw SizeError("bell_operator: need three settings per party");
  const BellFunctional3 fn;
  const std::size_t da = alice[0].rows(), db = bob[0].rows();
  ComplexMatrix op(da * db, da * db);
  for (std::size_t x = 0; x < kD; ++x) {
    ComplexMatrix ak = ComplexMatrix::identity(da);
    for (std::size_t k = 1; k < kD; ++k) {
      ak = ak * alice[x];
      for (std::size_t y = 0; y < kD; ++y) {
        cplx c = fn.lambda[k] * omega_pow(kD, static_cast<long long>(k * x * y));
        op += c * tensor(ak, bob[y].power(static_cast<unsigned>(k)));
      }
    }
  }
  return op;
}

SeesawResult seesaw_optimize(std::uint64_t seed, std::size_t restarts, std::size_t iters) {
  if (restarts < 1 || iters < 1) throw DomainError("seesaw_optimize: restarts and iters must be >= 1");
  std::vector<RestartOutcome> runs(restarts);
  parallel_for(restarts, [&](std::size_t r) { runs[r] = run_restart(derive_seed(seed, r), iters); });

  SeesawResult res;
  std::size_t best = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    res.restart_values.push_back(runs[r].value);
    if (runs[r].value > runs[best].value) best = r;
  }
  const RestartOutcome& win = runs[best];
  res.value = win.value;
  res.best_restart = best;
  res.history = win.history;
  res.iterations = win.history.size();

  std::vector<cplx> psi = win.state.column_vector(0);
  res.realization.state = Ket::normalized(psi, {kD, kD, 1});
  for (std::size_t x = 0; x < kD; ++x) res.realization.alice.push_back(from_basis(win.va[x]));
  for (std::size_t y = 0; y < kD; ++y) res.realization.bob.push_back(GeneralizedObservable::from_unitary(from_basis(win.vb[y]), kD));

  ComplexMatrix m(kD, kD, psi);
  res.state_schmidt = svd(m).s;
  return res;
}

DressedAlice dressed_alice(std::size_t aux_dim, std::size_t q_rank) {
  if (aux_dim < 1) throw DomainError("dressed_alice: aux_dim must be >= 1");
  if (q_rank > aux_dim) {
    throw DomainError("dressed_alice: q_rank " + std::to_string(q_rank) + " exceeds aux_dim " + std::to_string(aux_dim));
  }
  DressedAlice da;
  da.aux_dim = aux_dim;
  da.q_rank = q_rank;
  da.q = ComplexMatrix(aux_dim, aux_dim);
  for (std::size_t i = 0; i < q_rank; ++i) da.q(i, i) = 1.0;
  ComplexMatrix q_perp = ComplexMatrix::identity(aux_dim) - da.q;
  ComplexMatrix x = generalized_pauli(kD, PauliKind::X);
  da.a0 = tensor(generalized_pauli(kD, PauliKind::Z), ComplexMatrix::identity(aux_dim));
  da.a1 = tensor(x, da.q) + tensor(x.transpose(), q_perp);
  return da;
}

Realization extended_realization(const SchmidtVector& sv, const DressedAlice& da, std::uint64_t seed,
                                 bool break_branch, double* weight_out) {
  if (sv.d() != kD) throw DomainError("extended_realization: Schmidt vector must have d = 3");
  const std::size_t m = da.aux_dim;
  double w = 1.0;
  if (m >= 2 && da.q_rank != m) {
    Rng rng(seed);
    w = rng.uniform(0.1, 0.9);
  }
  if (weight_out) *weight_out = w;

  std::vector<cplx> chi(m * m);
  chi[0] = std::sqrt(w);
  if (m >= 2) chi[1 * m + 1] = std::sqrt(1.0 - w);

  const std::size_t n = kD * m;
  std::vector<cplx> amp(n * n);
  for (std::size_t a = 0; a < kD; ++a)
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t t = 0; t < m; ++t) {
        cplx c = chi[s * m + t];
        if (c == cplx{}) continue;
        amp[(a * m + s) * n + (a * m + t)] = sv[a] * c;
      }

  ComplexMatrix x = generalized_pauli(kD, PauliKind::X);
  ComplexMatrix q_perp = ComplexMatrix::identity(m) - da.q;
  ComplexMatrix b1 = tensor(x, da.q) + tensor(break_branch ? x : x.adjoint(), q_perp);
  ComplexMatrix b0 = tensor(generalized_pauli(kD, PauliKind::Z).conjugate(), ComplexMatrix::identity(m));

  Realization r;
  r.state = Ket::normalized(std::move(amp), {n, n, 1});
  r.alice = {da.a0, da.a1};
  r.bob = {GeneralizedObservable::from_unitary(b0, kD), GeneralizedObservable::from_unitary(b1, kD)};
  return r;
}

ExtendedReport extended_certification_check(const SchmidtVector& sv, const DressedAlice& da, std::uint64_t seed,
                                            bool break_branch) {
  ExtendedReport rep;
  Realization r = extended_realization(sv, da, seed, break_branch, &rep.weight);
  SteeringFunctional f = functional_coefficients(sv);
  rep.value = evaluate(f, r);
  rep.value_gap = static_cast<double>(kD) - rep.value;
  rep.lhs_exact = lhs_bound_exact(f, da.a0, da.a1).value;
  if (!(std::abs(rep.value_gap) <= 1e-9)) rep.failing_checks.push_back("value");
  if (!(rep.lhs_exact < static_cast<double>(kD) - 1e-6)) rep.failing_checks.push_back("lhs_bound");
  rep.passed = rep.failing_checks.empty();
  return rep;
}

}  // namespace steercert
