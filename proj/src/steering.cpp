#include "steercert/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/parallel.hpp"
#include "steercert/random.hpp"

namespace steercert {

namespace {

std::vector<ComplexMatrix> powers(const ComplexMatrix& a, std::size_t d) {
  std::vector<ComplexMatrix> p;
  p.reserve(d);
  p.push_back(ComplexMatrix::identity(a.rows()));
  for (std::size_t k = 1; k < d; ++k) p.push_back(p.back() * a);
  return p;
}

void check_shapes(const SteeringFunctional& f, const Realization& r) {
  if (r.alice.size() < 2 || r.bob.size() < 2) throw SizeError("steering: need two settings per party");
  if (r.d() != f.d) throw SizeError("steering: realization outcome count does not match the functional");
  if (r.state.factor_dims().size() != 3) throw SizeError("steering: state must have factors (A, B, E)");
}

// Branch matrix Q with eta^T Q eta = branch objective for argmax index s.
std::vector<double> branch_matrix(const SteeringFunctional& f, std::size_t s) {
  const std::size_t d = f.d;
  const auto& a = f.alpha.alpha();
  double sum_alpha = std::accumulate(a.begin(), a.end(), 0.0);
  std::vector<double> q(d * d, f.gamma);
  for (std::size_t i = 0; i < d; ++i) q[i * d + i] -= f.gamma * sum_alpha / a[i];
  q[s * d + s] += static_cast<double>(d);
  return q;
}

double quad(const std::vector<double>& q, const std::vector<double>& x) {
  const std::size_t d = x.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) acc += x[i] * q[i * d + j] * x[j];
  return acc;
}

void normalize(std::vector<double>& x) {
  double n = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  for (double& v : x) v /= n;
}

// Projected-gradient ascent of eta^T Q eta on the nonnegative unit sphere.
// The step 1/(2c) with c a Gershgorin shift keeps the update map entrywise
// nonnegative, so the projection only matters for the starting point.
std::vector<double> ascend(const std::vector<double>& q, std::vector<double> x) {
  const std::size_t d = x.size();
  double c = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) off += std::abs(q[i * d + j]);
    c = std::max(c, off - q[i * d + i]);
  }
  if (c <= 0.0) c = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
  const double step = 1.0 / (2.0 * c);
  std::vector<double> next(d);
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < d; ++j) g += q[i * d + j] * x[j];
      next[i] = std::max(0.0, x[i] + step * 2.0 * g);
    }
    normalize(next);
    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i) diff = std::max(diff, std::abs(next[i] - x[i]));
    x.swap(next);
    if (diff < 1e-15) break;
  }
  return x;
}

}  // namespace

std::string to_string(LhsMethod m) { return m == LhsMethod::ExactEigen ? "exact-eigen" : "paper-upper"; }

SteeringFunctional functional_coefficients(const SchmidtVector& sv) {
  const std::size_t d = sv.d();
  const auto& a = sv.alpha();
  double sum_alpha = std::accumulate(a.begin(), a.end(), 0.0);
  // c_j = sum_{i != j} alpha_i / alpha_j
  std::vector<double> c(d);
  for (std::size_t j = 0; j < d; ++j) c[j] = (sum_alpha - a[j]) / a[j];
  double total = std::accumulate(c.begin(), c.end(), 0.0);

  SteeringFunctional f{d, sv, static_cast<double>(d) / total, std::vector<cplx>(d)};
  std::vector<cplx> raw(d);
  for (std::size_t k = 0; k < d; ++k) {
    cplx s{};
    for (std::size_t j = 0; j < d; ++j) s += c[j] * omega_pow(d, static_cast<long long>(k * (d - j)));
    raw[k] = -(f.gamma / static_cast<double>(d)) * s;
  }
  f.delta[0] = -1.0;
  for (std::size_t k = 1; k < d; ++k) {
    cplx v = 0.5 * (raw[k] + std::conj(raw[d - k]));
    f.delta[k] = {v.real() + 0.0, v.imag() + 0.0};
  }
  return f;
}

ComplexMatrix steering_operator(const SteeringFunctional& f, const Realization& r) {
  check_shapes(f, r);
  const std::size_t d = f.d;
  const std::size_t db = r.dim_b(), de = r.dim_e();
  auto a0 = powers(r.alice[0], d);
  auto a1 = powers(r.alice[1], d);
  ComplexMatrix ib = ComplexMatrix::identity(db);
  ComplexMatrix op(r.dim_a() * db, r.dim_a() * db);
  for (std::size_t k = 1; k < d; ++k) {
    op += tensor(a0[k], r.bob[0][k]);
    op += f.gamma * tensor(a1[k], r.bob[1][k]);
    op += f.delta[k] * tensor(a0[k], ib);
  }
  return tensor(op, ComplexMatrix::identity(de));
}

double evaluate(const SteeringFunctional& f, const Realization& r) {
  check_shapes(f, r);
  const std::size_t d = f.d;
  auto a0 = powers(r.alice[0], d);
  auto a1 = powers(r.alice[1], d);
  ComplexMatrix ib = ComplexMatrix::identity(r.dim_b());
  cplx acc{};
  for (std::size_t k = 1; k < d; ++k) {
    acc += local_expectation(r.state, a0[k], r.bob[0][k]);
    acc += f.gamma * local_expectation(r.state, a1[k], r.bob[1][k]);
    acc += f.delta[k] * local_expectation(r.state, a0[k], ib);
  }
  return acc.real();
}

ComplexMatrix lhs_operator(const SteeringFunctional& f, const ComplexMatrix& a0, const ComplexMatrix& a1,
                           std::size_t b0, std::size_t b1) {
  const std::size_t d = f.d;
  auto p0 = powers(a0, d);
  auto p1 = powers(a1, d);
  ComplexMatrix m(a0.rows(), a0.rows());
  for (std::size_t k = 1; k < d; ++k) {
    m += (omega_pow(d, static_cast<long long>(k * b0)) + f.delta[k]) * p0[k];
    m += (f.gamma * omega_pow(d, static_cast<long long>(k * b1))) * p1[k];
  }
  return (m + m.adjoint()) * 0.5;
}

LhsOptimum lhs_bound_exact(const SteeringFunctional& f, const ComplexMatrix& a0, const ComplexMatrix& a1) {
  if (a0.rows() != a1.rows() || !a0.is_square() || !a1.is_square()) {
    throw SizeError("lhs_bound_exact: Alice observables must be square and of equal size");
  }
  LhsOptimum best;
  best.method = LhsMethod::ExactEigen;
  bool first = true;
  for (std::size_t b0 = 0; b0 < f.d; ++b0)
    for (std::size_t b1 = 0; b1 < f.d; ++b1) {
      double v = hermitian_eig(lhs_operator(f, a0, a1, b0, b1)).values.front();
      if (first || v > best.value + 1e-12) {
        best.value = v;
        best.b0 = b0;
        best.b1 = b1;
        first = false;
      }
    }
  return best;
}

LhsOptimum lhs_bound_exact(const SteeringFunctional& f) {
  return lhs_bound_exact(f, generalized_pauli(f.d, PauliKind::Z), generalized_pauli(f.d, PauliKind::X));
}

double paper_objective(const SteeringFunctional& f, const std::vector<double>& eta) {
  if (eta.size() != f.d) throw SizeError("paper_objective: eta has wrong length");
  const auto& a = f.alpha.alpha();
  double sum_alpha = std::accumulate(a.begin(), a.end(), 0.0);
  double max_sq = 0.0, sum = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < f.d; ++i) {
    max_sq = std::max(max_sq, eta[i] * eta[i]);
    sum += eta[i];
    weighted += eta[i] * eta[i] / a[i];
  }
  return static_cast<double>(f.d) * max_sq + f.gamma * (sum * sum - sum_alpha * weighted);
}

LhsOptimum lhs_bound_paper_upper(const SteeringFunctional& f, std::size_t restarts, std::uint64_t seed) {
  if (restarts < 1) throw DomainError("lhs_bound_paper_upper: restarts must be >= 1");
  const std::size_t d = f.d;

  // Deterministic starts first, then seeded random ones.
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))));
  starts.push_back(f.alpha.alpha());
  for (std::size_t s = 0; s < d; ++s) {
    std::vector<double> e(d, 0.0);
    e[s] = 1.0;
    starts.push_back(e);
  }
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    std::vector<double> x(d);
    for (double& v : x) v = std::abs(rng.normal()) + 1e-3;
    normalize(x);
    starts.push_back(x);
  }

  std::vector<std::vector<double>> branches(d);
  for (std::size_t s = 0; s < d; ++s) branches[s] = branch_matrix(f, s);

  std::vector<LhsOptimum> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    LhsOptimum local;
    local.method = LhsMethod::PaperUpper;
    local.value = -1e300;
    for (std::size_t s = 0; s < d; ++s) {
      std::vector<double> eta = ascend(branches[s], starts[i]);
      double v = std::max(quad(branches[s], eta), paper_objective(f, eta));
      if (v > local.value + 1e-15) {
        local.value = v;
        local.eta = eta;
        local.branch = s;
      }
    }
    results[i] = std::move(local);
  });

  LhsOptimum best = results[0];
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > best.value + 1e-15) best = results[i];
  return best;
}

ViolationGap violation_gap(const SteeringFunctional& f) {
  ViolationGap g;
  g.beta_q = static_cast<double>(f.d);
  g.beta_l = lhs_bound_exact(f).value;
  g.gap = g.beta_q - g.beta_l;
  return g;
}

}  // namespace steercert
