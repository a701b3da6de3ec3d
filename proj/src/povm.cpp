#include "steercert/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"

namespace steercert {

namespace {

ComplexMatrix gram(const Povm& p) {
  const std::size_t n = p.size();
  ComplexMatrix g(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      cplx t = (p[a] * p[b]).trace();
      g(a, b) = t;
      g(b, a) = std::conj(t);
    }
  return g;
}

}  // namespace

PhaseTable::PhaseTable(std::size_t d_, std::vector<long long> xi_) : d(d_), xi(std::move(xi_)) {
  if (d < 2) throw DomainError("PhaseTable: d must be at least 2");
  if (xi.size() != d) throw SizeError("PhaseTable: expected " + std::to_string(d) + " exponents");
}

PhaseTable PhaseTable::listed(std::size_t d) {
  switch (d) {
    case 3: return PhaseTable(3, {0, 1, 3});
    case 4: return PhaseTable(4, {0, 1, 3, 9});
    case 5: return PhaseTable(5, {0, 1, 4, 14, 16});
    case 6: return PhaseTable(6, {0, 1, 3, 8, 12, 18});
    default: throw DomainError("PhaseTable::listed: no table for d = " + std::to_string(d));
  }
}

bool sidon_check(const PhaseTable& table) {
  const long long n = static_cast<long long>(table.modulus());
  std::set<long long> seen;
  for (std::size_t i = 0; i < table.d; ++i)
    for (std::size_t j = 0; j < table.d; ++j) {
      if (i == j) continue;
      long long diff = ((table.xi[i] - table.xi[j]) % n + n) % n;
      if (diff == 0 || !seen.insert(diff).second) return false;
    }
  return true;
}

Povm covariant_povm(std::size_t d, const Ket& nu) {
  if (nu.dim() != d) throw SizeError("covariant_povm: fiducial dimension differs from d");
  ComplexMatrix x = generalized_pauli(d, PauliKind::X);
  ComplexMatrix z = generalized_pauli(d, PauliKind::Z);
  std::vector<ComplexMatrix> elems;
  elems.reserve(d * d);
  ComplexMatrix xk = ComplexMatrix::identity(d);
  for (std::size_t k = 0; k < d; ++k) {
    ComplexMatrix u = xk;
    for (std::size_t l = 0; l < d; ++l) {
      std::vector<cplx> v = u.apply(nu.amplitudes());
      elems.push_back(ComplexMatrix::outer(v, v) * (1.0 / static_cast<double>(d)));
      u = u * z;
    }
    xk = xk * x;
  }
  Povm p(std::move(elems));
  std::size_t rank = numerical_rank(gram(p), 1e-8);
  if (rank < d * d) {
    throw NotExtremalError("covariant_povm: elements are linearly dependent (Gram rank " + std::to_string(rank) +
                               " < " + std::to_string(d * d) + ")",
                           rank, d * d);
  }
  return p;
}

PartialPovmWeights partial_povm_weights(const SchmidtVector& sv) {
  const std::size_t d = sv.d();
  const double dd = static_cast<double>(d);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (sv[i] < 1.0 / dd - 1e-12) {
      throw DomainError("partial_povm: alpha_" + std::to_string(i) + " = " + std::to_string(sv[i]) +
                        " is below 1/d = " + std::to_string(1.0 / dd));
    }
  }
  const double n = dd * dd - dd + 1.0;
  PartialPovmWeights w;
  double sum_lambda = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    double l = 1.0 / (dd * dd * sv[i] * sv[i]);
    w.lambda.push_back(l);
    sum_lambda += l;
  }
  const double lambda_d = (dd - sum_lambda) / n;
  for (std::size_t b = 0; b < d * d - d + 1; ++b) w.lambda.push_back(lambda_d);
  for (std::size_t i = 0; i + 1 < d; ++i) w.mu.push_back(std::sqrt((1.0 - w.lambda[i]) / (n * lambda_d)));
  w.mu.push_back(std::sqrt(1.0 / (n * lambda_d)));
  return w;
}

Povm partial_povm(const SchmidtVector& sv, const PhaseTable& table) {
  const std::size_t d = sv.d();
  if (table.d != d) throw DomainError("partial_povm: phase table is for d = " + std::to_string(table.d));
  PartialPovmWeights w = partial_povm_weights(sv);
  const std::size_t n = table.modulus();
  std::vector<ComplexMatrix> elems;
  elems.reserve(d * d);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    ComplexMatrix e(d, d);
    e(i, i) = w.lambda[i];
    elems.push_back(std::move(e));
  }
  for (std::size_t b = d - 1; b < d * d; ++b) {
    std::vector<cplx> delta(d);
    const long long shift = static_cast<long long>(b) - static_cast<long long>(d) + 1;
    for (std::size_t i = 0; i < d; ++i) {
      long long ph = ((table.xi[i] * shift) % static_cast<long long>(n) + static_cast<long long>(n)) %
                     static_cast<long long>(n);
      delta[i] = w.mu[i] * omega_pow(n, ph);
    }
    elems.push_back(ComplexMatrix::outer(delta, delta) * w.lambda[b]);
  }
  return Povm(std::move(elems));
}

PovmValidation validate_povm(const Povm& p, double tol) {
  PovmValidation v;
  const std::size_t n = p.dim();
  ComplexMatrix total(n, n);
  for (std::size_t b = 0; b < p.size(); ++b) {
    double h = p[b].hermiticity_residual();
    ComplexMatrix sym = (p[b] + p[b].adjoint()) * 0.5;
    double lo = hermitian_eig(sym).values.back();
    v.hermiticity_residuals.push_back(h);
    v.min_eigenvalues.push_back(lo);
    if (h > tol || lo < -tol) v.failing_elements.push_back(b);
    total += p[b];
  }
  v.completeness_residual = frobenius_distance(total, ComplexMatrix::identity(n));
  v.pass = v.failing_elements.empty() && v.completeness_residual <= tol;
  if (!v.failing_elements.empty()) {
    v.message = "element " + std::to_string(v.failing_elements.front()) + " is not positive semidefinite";
  } else if (v.completeness_residual > tol) {
    v.message = "elements do not sum to the identity";
  }
  return v;
}

ExtremalityReport is_extremal_rank_one(const Povm& p, double tol) {
  ExtremalityReport r;
  r.element_count = p.size();
  r.all_rank_one = true;
  for (std::size_t b = 0; b < p.size(); ++b) {
    ComplexMatrix sym = (p[b] + p[b].adjoint()) * 0.5;
    std::vector<double> ev = hermitian_eig(sym).values;
    double ratio = ev.size() < 2 ? 0.0 : (ev[0] > 0.0 ? std::max(ev[1], 0.0) / ev[0] : 1.0);
    r.second_eig_ratio.push_back(ratio);
    if (!(ev[0] > 0.0) || ratio > tol) r.all_rank_one = false;
  }
  r.gram_rank = numerical_rank(gram(p), tol);
  r.extremal = r.all_rank_one && r.gram_rank == p.size();
  return r;
}

ComplexMatrix w_basis_element(const SchmidtVector& sv, std::size_t i, std::size_t j) {
  const std::size_t d = sv.d();
  std::vector<double> inv(d);
  for (std::size_t a = 0; a < d; ++a) inv[a] = 1.0 / sv[a];
  ComplexMatrix p_inv = ComplexMatrix::diagonal(std::span<const double>(inv));
  return p_inv * weyl_operator(d, i, j).conjugate() * p_inv;
}

Theorem3Report theorem3_residuals(const Povm& r_povm, const Povm& ideal, const Ket& psi, const SchmidtVector& sv) {
  const std::size_t d = sv.d();
  if (ideal.size() != r_povm.size()) throw SizeError("theorem3_residuals: outcome counts differ");
  if (ideal.dim() != d) throw SizeError("theorem3_residuals: ideal POVM must act on dimension d");
  if (psi.factor_dims().empty() || psi.factor_dims()[0] != d) {
    throw SizeError("theorem3_residuals: first factor of the state must have dimension d");
  }
  const std::size_t nb = ideal.size();
  Ket ideal_state = schmidt_state(sv);

  Theorem3Report rep;
  rep.d = d;
  rep.outcomes = nb;
  rep.residuals.resize(d * d * nb);

  std::vector<ComplexMatrix> weyl(d * d), w(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      weyl[i * d + j] = weyl_operator(d, i, j);
      w[i * d + j] = w_basis_element(sv, i, j);
    }
  std::vector<double> pdiag(sv.alpha());
  ComplexMatrix p = ComplexMatrix::diagonal(std::span<const double>(pdiag));

  for (std::size_t b = 0; b < nb; ++b) {
    // l^b_{ij} = (1/d) Tr[(X^i Z^j)^T P I_b P], from Hilbert-Schmidt orthogonality.
    ComplexMatrix pip = p * ideal[b] * p;
    ComplexMatrix recon(d, d);
    for (std::size_t ij = 0; ij < d * d; ++ij) {
      cplx measured = local_expectation(psi, weyl[ij], r_povm[b]);
      cplx expected = local_expectation(ideal_state, weyl[ij], ideal[b]);
      rep.residuals[ij * nb + b] = std::abs(measured - expected);
      rep.max_residual = std::max(rep.max_residual, rep.residuals[ij * nb + b]);

      cplx l = (weyl[ij].transpose() * pip).trace() / static_cast<double>(d);
      recon += l * w[ij];
      rep.decomposition_residual = std::max(rep.decomposition_residual, std::abs(static_cast<double>(d) * l - measured));
    }
    rep.reconstruction_residual = std::max(rep.reconstruction_residual, frobenius_distance(recon, ideal[b]));
  }
  return rep;
}

Povm tamper_povm(const Povm& p, std::size_t element, double eps) {
  if (element >= p.size()) throw IndexError("tamper_povm: element out of range");
  std::vector<ComplexMatrix> elems = p.elements();
  const std::size_t n = p.dim();
  elems[element] = (1.0 - eps) * elems[element] + eps * ComplexMatrix::identity(n);
  ComplexMatrix total(n, n);
  for (const auto& e : elems) total += e;
  ComplexMatrix s = inverse_sqrt_psd(total);
  for (auto& e : elems) e = s * e * s;
  return Povm(std::move(elems));
}

Povm extend_povm(const Povm& p, std::size_t junk_dim) {
  std::vector<ComplexMatrix> elems;
  ComplexMatrix id = ComplexMatrix::identity(junk_dim);
  for (const auto& e : p.elements()) elems.push_back(tensor(e, id));
  return Povm(std::move(elems));
}

Povm conjugate_povm(const Povm& p, const ComplexMatrix& u) {
  std::vector<ComplexMatrix> elems;
  ComplexMatrix ud = u.adjoint();
  for (const auto& e : p.elements()) elems.push_back(u * e * ud);
  return Povm(std::move(elems));
}

}  // namespace steercert
