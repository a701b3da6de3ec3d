#include "steercert/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"

namespace steercert {

namespace {

std::vector<cplx> apply_ab(const Realization& r, const ComplexMatrix& a, const ComplexMatrix* b,
                           std::span<const cplx> psi) {
  const auto& dims = r.state.factor_dims();
  std::vector<cplx> w = apply_on_factor(a, psi, dims, 0);
  if (b) w = apply_on_factor(*b, w, dims, 1);
  return w;
}

double distance(std::span<const cplx> a, std::span<const cplx> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace

StabilizerResiduals stabilizer_residuals(const SteeringFunctional& f, const Realization& r) {
  if (r.d() != f.d || r.alice.size() < 2 || r.bob.size() < 2) throw SizeError("stabilizer_residuals: shape mismatch");
  const std::size_t d = f.d;
  const auto psi = r.state.amplitudes();
  StabilizerResiduals out;
  std::vector<cplx> s(psi.size());
  ComplexMatrix a0k = ComplexMatrix::identity(r.dim_a());
  ComplexMatrix a1k = a0k;
  for (std::size_t k = 1; k < d; ++k) {
    a0k = a0k * r.alice[0];
    a1k = a1k * r.alice[1];
    out.per_k.push_back(distance(apply_ab(r, a0k, &r.bob[0][k], psi), psi));
    std::vector<cplx> t1 = apply_ab(r, a1k, &r.bob[1][k], psi);
    std::vector<cplx> t2 = apply_ab(r, a0k, nullptr, psi);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += f.gamma * t1[i] + f.delta[k] * t2[i];
  }
  out.s_residual = distance(s, psi);
  return out;
}

double commutation_residual_unchecked(const Realization& r) {
  if (r.bob.size() < 2) throw SizeError("commutation_residual: need two Bob observables");
  const std::size_t d = r.d();
  const ComplexMatrix& b0 = r.bob[0][1];
  const ComplexMatrix& b1 = r.bob[1][1];
  const std::size_t keep[] = {1};
  ComplexMatrix root = sqrt_psd(reduced_density(r.state, keep));
  ComplexMatrix comm = b0 * b1 - omega_pow(d, -1) * (b1 * b0);
  return (comm * root).frobenius_norm();
}

double commutation_residual(const Realization& r, double tol) {
  for (std::size_t y = 0; y < 2 && y < r.bob.size(); ++y) {
    if (!is_projective(r.bob[y], tol).projective) {
      throw ContractError("commutation_residual: Bob observable " + std::to_string(y) + " is not projective");
    }
  }
  return commutation_residual_unchecked(r);
}

ComplexMatrix ztilde_operator(const SteeringFunctional& f) {
  ComplexMatrix z = generalized_pauli(f.d, PauliKind::Z);
  ComplexMatrix m = (1.0 + f.gamma) * ComplexMatrix::identity(f.d);
  ComplexMatrix zk = ComplexMatrix::identity(f.d);
  for (std::size_t k = 1; k < f.d; ++k) {
    zk = zk * z;
    m -= f.delta[k] * zk;
  }
  return m;
}

std::vector<double> ztilde_spectrum(const SteeringFunctional& f) {
  // Z~ is diagonal in the computational basis, so its eigenvalue for |l> is
  // the l-th diagonal entry.
  ComplexMatrix m = ztilde_operator(f);
  std::vector<double> out(f.d);
  for (std::size_t l = 0; l < f.d; ++l) out[l] = m(l, l).real();
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::Certified ? "certified" : "failed"; }

CertReport certify(const SteeringFunctional& f, const Realization& r, double tol) {
  CertReport rep;
  rep.d = f.d;
  rep.tolerance = tol;
  auto fail = [&](std::string name) { rep.failing_checks.push_back(std::move(name)); };

  rep.value = evaluate(f, r);
  rep.value_gap = static_cast<double>(f.d) - rep.value;
  if (!(std::abs(rep.value_gap) <= tol)) fail("value_gap");

  bool all_projective = true;
  for (std::size_t y = 0; y < r.bob.size(); ++y) {
    ProjectivityCheck pc;
    pc.detail = is_projective(r.bob[y], tol);
    pc.projective = pc.detail.projective;
    pc.residual = pc.detail.unitarity_residual;
    if (!pc.projective) {
      all_projective = false;
      fail("projectivity_b" + std::to_string(y));
    }
    rep.projectivity.push_back(pc);
  }

  StabilizerResiduals st = stabilizer_residuals(f, r);
  rep.stabilizer_residuals = st.per_k;
  rep.s_residual = st.s_residual;
  for (std::size_t k = 0; k < st.per_k.size(); ++k)
    if (!(st.per_k[k] <= tol)) fail("stabilizer_k" + std::to_string(k + 1));
  if (!(st.s_residual <= tol)) fail("s_residual");

  rep.commutation_residual = all_projective ? commutation_residual(r, tol) : commutation_residual_unchecked(r);
  if (!(rep.commutation_residual <= tol)) fail("commutation");

  std::vector<double> zt = ztilde_spectrum(f);
  rep.ztilde_min_eig = *std::min_element(zt.begin(), zt.end());
  if (!(rep.ztilde_min_eig > 0.0)) fail("ztilde_positive");

  rep.verdict = rep.failing_checks.empty() ? Verdict::Certified : Verdict::Failed;
  return rep;
}

BobExtraction extract_bob_unitary(const SteeringFunctional& f, const Realization& r) {
  BobExtraction out;
  const std::size_t d = f.d;
  const std::size_t n = r.dim_b();
  if (r.bob.size() < 2 || r.d() != d || n % d != 0) return out;
  const std::size_t m = n / d;
  const ComplexMatrix& b0 = r.bob[0][1];
  const ComplexMatrix& b1 = r.bob[1][1];

  ComplexMatrix proj(n, n);
  ComplexMatrix pw = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < d; ++k) {
    proj += pw;
    pw = pw * b0;
  }
  proj *= 1.0 / static_cast<double>(d);
  proj = (proj + proj.adjoint()) * 0.5;
  EigResult e;
  try {
    e = hermitian_eig(proj, 1e-6);
  } catch (const Error&) {
    return out;
  }
  std::size_t rank = static_cast<std::size_t>(std::count_if(e.values.begin(), e.values.end(), [](double v) { return v > 0.5; }));
  if (rank != m) return out;

  // Columns of V: f_{j,s} = B_1^j f_{0,s}, placed at index j * m + s.
  ComplexMatrix v(n, n);
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<cplx> col = e.vectors.column_vector(s);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < n; ++i) v(i, j * m + s) = col[i];
      col = b1.apply(col);
    }
  }
  out.u_b = v.adjoint();
  ComplexMatrix ij = ComplexMatrix::identity(m);
  ComplexMatrix z0 = tensor(generalized_pauli(d, PauliKind::Z).conjugate(), ij);
  ComplexMatrix x1 = tensor(generalized_pauli(d, PauliKind::X), ij);
  out.observable_residual = std::max(frobenius_distance(out.u_b * b0 * v, z0), frobenius_distance(out.u_b * b1 * v, x1));

  // U_B psi against psi(alpha) (x) xi, xi obtained by contracting with psi(alpha).
  const std::size_t da = r.dim_a(), de = r.dim_e();
  if (da != d) return out;
  std::vector<cplx> phi = apply_on_factor(out.u_b, r.state.amplitudes(), r.state.factor_dims(), 1);
  const std::size_t junk = m * de;
  std::vector<cplx> xi(junk);
  // phi index: (a * n + (b' * m + b'')) * de + e
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t t = 0; t < junk; ++t) xi[t] += f.alpha[a] * phi[(a * n + a * m) * de + t];
  double acc = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t t = 0; t < junk; ++t) {
        cplx ideal = a == b ? f.alpha[a] * xi[t] : cplx{};
        acc += std::norm(phi[(a * n + b * m) * de + t] - ideal);
      }
  out.state_residual = std::sqrt(acc);
  out.available = true;
  return out;
}

}  // namespace steercert
