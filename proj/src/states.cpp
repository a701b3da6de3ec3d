#include "steercert/states.hpp"

#include <cmath>
#include <string>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/random.hpp"

namespace steercert {

namespace {

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void require_positive(const std::vector<double>& alpha) {
  if (alpha.size() < 2) throw DomainError("SchmidtVector: need at least 2 coefficients");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!std::isfinite(alpha[i]) || alpha[i] <= 0.0) {
      throw DomainError("alpha_" + std::to_string(i) + " must be positive, got " + std::to_string(alpha[i]));
    }
  }
}

}  // namespace

SchmidtVector::SchmidtVector(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  require_positive(alpha_);
  double n = euclid(alpha_);
  if (std::abs(n - 1.0) > 1e-6) {
    throw DomainError("SchmidtVector: norm " + std::to_string(n) + " deviates from 1 by more than 1e-6");
  }
  for (double& x : alpha_) x /= n;
}

SchmidtVector SchmidtVector::normalized(std::vector<double> alpha) {
  require_positive(alpha);
  double n = euclid(alpha);
  for (double& x : alpha) x /= n;
  return SchmidtVector(std::move(alpha), Unchecked{});
}

SchmidtVector SchmidtVector::uniform(std::size_t d) {
  if (d < 2) throw DomainError("SchmidtVector::uniform: d must be at least 2");
  return SchmidtVector(std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))), Unchecked{});
}

void validate_realization(const Realization& r, double tol) {
  const auto& dims = r.state.factor_dims();
  if (dims.size() != 3) throw SizeError("Realization: state must have factors (A, B, E)");
  if (r.alice.empty() || r.bob.empty()) throw SizeError("Realization: missing observables");
  const std::size_t d = r.d();
  for (std::size_t x = 0; x < r.alice.size(); ++x) {
    const ComplexMatrix& a = r.alice[x];
    if (a.rows() != dims[0] || a.cols() != dims[0]) {
      throw SizeError("Realization: Alice observable " + std::to_string(x) + " does not act on factor A");
    }
    ComplexMatrix id = ComplexMatrix::identity(dims[0]);
    if (max_abs_diff(a * a.adjoint(), id) > tol) {
      throw DomainError("Realization: Alice observable " + std::to_string(x) + " is not unitary");
    }
    if (max_abs_diff(a.power(static_cast<unsigned>(d)), id) > tol) {
      throw DomainError("Realization: Alice observable " + std::to_string(x) + " does not satisfy A^d = I");
    }
  }
  for (std::size_t y = 0; y < r.bob.size(); ++y) {
    if (r.bob[y].outcomes() != d) throw SizeError("Realization: Bob observables have different outcome counts");
    if (r.bob[y].dim() != dims[1]) {
      throw SizeError("Realization: Bob observable " + std::to_string(y) + " does not act on factor B");
    }
  }
}

Ket schmidt_state(const SchmidtVector& sv) {
  const std::size_t d = sv.d();
  std::vector<cplx> v(d * d);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = sv[i];
  return Ket(std::move(v), {d, d});
}

Realization ideal_realization(const SchmidtVector& sv) {
  const std::size_t d = sv.d();
  Realization r;
  Ket psi = schmidt_state(sv);
  r.state = Ket(psi.vec(), {d, d, 1});
  ComplexMatrix z = generalized_pauli(d, PauliKind::Z);
  ComplexMatrix x = generalized_pauli(d, PauliKind::X);
  r.alice = {z, x};
  r.bob = {GeneralizedObservable::from_unitary(z.conjugate(), d), GeneralizedObservable::from_unitary(x, d)};
  return r;
}

Realization dress_realization(const Realization& r, std::size_t junk_dim_b, std::size_t eve_dim, std::uint64_t seed,
                              bool apply_unitary) {
  if (junk_dim_b < 1 || eve_dim < 1) throw DomainError("dress_realization: junk and Eve dimensions must be >= 1");
  validate_realization(r, 1e-8);
  Rng rng(seed);
  Ket xi = random_ket({junk_dim_b, eve_dim}, rng);
  std::vector<cplx> xv = xi.vec();
  for (const cplx& z : xi.vec()) {
    if (std::abs(z) > 1e-8) {
      cplx ph = std::conj(z) / std::abs(z);
      for (cplx& w : xv) w *= ph;
      break;
    }
  }

  const std::size_t da = r.dim_a(), db = r.dim_b(), de = r.dim_e();
  const std::size_t nb = db * junk_dim_b, ne = de * eve_dim;
  std::vector<cplx> amp(da * nb * ne);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t e = 0; e < de; ++e) {
        cplx s = r.state[(a * db + b) * de + e];
        if (s == cplx{}) continue;
        for (std::size_t j = 0; j < junk_dim_b; ++j)
          for (std::size_t f = 0; f < eve_dim; ++f)
            amp[(a * nb + b * junk_dim_b + j) * ne + e * eve_dim + f] = s * xv[j * eve_dim + f];
      }

  Realization out;
  out.state = Ket::normalized(std::move(amp), {da, nb, ne});
  out.alice = r.alice;
  ComplexMatrix junk_id = ComplexMatrix::identity(junk_dim_b);
  for (const auto& g : r.bob) {
    std::vector<ComplexMatrix> ops;
    for (const auto& b : g.operators()) ops.push_back(tensor(b, junk_id));
    out.bob.emplace_back(std::move(ops), 1e-8);
  }
  if (apply_unitary) out = conjugate_bob(out, haar_unitary(nb, rng));
  return out;
}

Realization conjugate_bob(const Realization& r, const ComplexMatrix& u) {
  if (u.rows() != r.dim_b() || u.cols() != r.dim_b()) throw SizeError("conjugate_bob: unitary does not match B");
  Realization out;
  out.state = Ket::normalized(apply_on_factor(u, r.state.amplitudes(), r.state.factor_dims(), 1), r.state.factor_dims());
  out.alice = r.alice;
  for (const auto& g : r.bob) out.bob.push_back(g.conjugated(u));
  return out;
}

}  // namespace steercert
