#include "steercert/measurements.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "steercert/error.hpp"
#include "steercert/linalg.hpp"

namespace steercert {

cplx omega_pow(std::size_t d, long long k) {
  long long dd = static_cast<long long>(d);
  long long r = ((k % dd) + dd) % dd;
  if (r == 0) return 1.0;
  if (2 * r == dd) return -1.0;
  if (4 * r == dd) return cplx(0.0, 1.0);
  if (4 * r == 3 * dd) return cplx(0.0, -1.0);
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(dd));
}

ComplexMatrix generalized_pauli(std::size_t d, PauliKind kind) {
  if (d < 2) throw DomainError("generalized_pauli: d must be at least 2, got " + std::to_string(d));
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (kind == PauliKind::Z) m(i, i) = omega_pow(d, static_cast<long long>(i));
    else m((i + 1) % d, i) = 1.0;
  }
  return m;
}

ComplexMatrix weyl_operator(std::size_t d, std::size_t i, std::size_t j) {
  return generalized_pauli(d, PauliKind::X).power(static_cast<unsigned>(i)) *
         generalized_pauli(d, PauliKind::Z).power(static_cast<unsigned>(j));
}

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw SizeError("Povm: no elements");
  dim_ = elements_[0].rows();
  for (std::size_t b = 0; b < elements_.size(); ++b) {
    if (elements_[b].rows() != dim_ || elements_[b].cols() != dim_) {
      throw SizeError("Povm: element " + std::to_string(b) + " is not " + std::to_string(dim_) + "x" +
                      std::to_string(dim_));
    }
  }
}

GeneralizedObservable::GeneralizedObservable(std::vector<ComplexMatrix> operators, double tol)
    : ops_(std::move(operators)) {
  if (ops_.size() < 2) throw DomainError("GeneralizedObservable: need at least 2 outcomes");
  std::size_t n = ops_[0].rows();
  for (const auto& b : ops_) {
    if (b.rows() != n || b.cols() != n) throw SizeError("GeneralizedObservable: operator shapes differ");
  }
  const std::size_t d = ops_.size();
  if (max_abs_diff(ops_[0], ComplexMatrix::identity(n)) > tol) {
    throw InvalidObservableError("GeneralizedObservable: B_0 is not the identity");
  }
  for (std::size_t k = 1; k < d; ++k) {
    if (max_abs_diff(ops_[d - k], ops_[k].adjoint()) > tol) {
      throw InvalidObservableError("GeneralizedObservable: B_" + std::to_string(d - k) + " is not B_" +
                                   std::to_string(k) + "^dagger");
    }
    if (operator_norm(ops_[k]) > 1.0 + tol) {
      throw InvalidObservableError("GeneralizedObservable: ||B_" + std::to_string(k) + "|| exceeds 1");
    }
  }
}

GeneralizedObservable GeneralizedObservable::from_unitary(const ComplexMatrix& u, std::size_t d) {
  if (d < 2) throw DomainError("from_unitary: d must be at least 2");
  if (!u.is_square()) throw SizeError("from_unitary: matrix not square");
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  ops.push_back(ComplexMatrix::identity(u.rows()));
  for (std::size_t k = 1; k < d; ++k) ops.push_back(ops.back() * u);
  return GeneralizedObservable(std::move(ops), 1e-8);
}

GeneralizedObservable GeneralizedObservable::conjugated(const ComplexMatrix& u) const {
  GeneralizedObservable g;
  g.ops_.reserve(ops_.size());
  ComplexMatrix ud = u.adjoint();
  for (const auto& b : ops_) g.ops_.push_back(u * b * ud);
  return g;
}

GeneralizedObservable povm_to_observable(const Povm& p) {
  const std::size_t d = p.size();
  if (d < 2) throw DomainError("povm_to_observable: need at least 2 outcomes");
  std::vector<ComplexMatrix> ops(d, ComplexMatrix(p.dim(), p.dim()));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < d; ++a) ops[k] += omega_pow(d, static_cast<long long>(k * a)) * p[a];
  return GeneralizedObservable(std::move(ops), 1e-8);
}

Povm observable_to_povm(const GeneralizedObservable& g) {
  const std::size_t d = g.outcomes();
  const std::size_t n = g.dim();
  std::vector<ComplexMatrix> elems(d, ComplexMatrix(n, n));
  bool clipped = false;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t k = 0; k < d; ++k) elems[a] += omega_pow(d, -static_cast<long long>(a * k)) * g[k];
    elems[a] *= 1.0 / static_cast<double>(d);
    elems[a] = (elems[a] + elems[a].adjoint()) * 0.5;
    EigResult e = hermitian_eig(elems[a]);
    double lo = e.values.back();
    if (lo < -1e-6) {
      throw InvalidObservableError("observable_to_povm: element " + std::to_string(a) + " has eigenvalue " +
                                   std::to_string(lo));
    }
    if (lo < 0.0) {
      for (double& v : e.values) v = std::max(v, 0.0);
      elems[a] = e.vectors * ComplexMatrix::diagonal(std::span<const double>(e.values)) * e.vectors.adjoint();
      clipped = true;
    }
  }
  if (clipped) {
    ComplexMatrix total(n, n);
    for (const auto& m : elems) total += m;
    ComplexMatrix s = inverse_sqrt_psd(total);
    for (auto& m : elems) m = s * m * s;
  }
  return Povm(std::move(elems));
}

ProjectivityReport is_projective(const GeneralizedObservable& g, double tol) {
  ProjectivityReport r;
  const std::size_t d = g.outcomes();
  const ComplexMatrix& b1 = g[1];
  r.unitarity_residual = unitarity_residual(b1);
  ComplexMatrix pw = ComplexMatrix::identity(g.dim());
  for (std::size_t k = 1; k < d; ++k) {
    pw = pw * b1;
    r.powers_residual = std::max(r.powers_residual, frobenius_distance(g[k], pw));
  }
  r.order_residual = frobenius_distance(pw * b1, ComplexMatrix::identity(g.dim()));
  r.projective = r.unitarity_residual <= tol && r.order_residual <= tol && r.powers_residual <= tol;
  return r;
}

CorrelationTable::CorrelationTable(std::size_t d, std::size_t nx, std::size_t ny, std::vector<double> p, double tol)
    : d_(d), nx_(nx), ny_(ny), p_(std::move(p)) {
  if (d == 0 || nx == 0 || ny == 0) throw SizeError("CorrelationTable: dimensions must be positive");
  if (p_.size() != nx * ny * d * d) {
    throw SizeError("CorrelationTable: expected " + std::to_string(nx * ny * d * d) + " probabilities, got " +
                    std::to_string(p_.size()));
  }
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (std::size_t ab = 0; ab < d * d; ++ab) {
        double v = p_[(x * ny + y) * d * d + ab];
        if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12) {
          throw DomainError("CorrelationTable: probability out of range in slice (" + std::to_string(x) + "," +
                            std::to_string(y) + ")");
        }
        s += v;
      }
      if (std::abs(s - 1.0) > tol) {
        throw DomainError("CorrelationTable: slice (" + std::to_string(x) + "," + std::to_string(y) +
                          ") sums to " + std::to_string(s));
      }
    }
}

double CorrelationTable::operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
  if (a >= d_ || b >= d_ || x >= nx_ || y >= ny_) throw IndexError("CorrelationTable: index out of range");
  return p_[((x * ny_ + y) * d_ + a) * d_ + b];
}

cplx correlator(const CorrelationTable& t, std::size_t k, std::size_t l, std::size_t x, std::size_t y) {
  const std::size_t d = t.d();
  if (k >= d || l >= d || x >= t.nx() || y >= t.ny()) throw IndexError("correlator: index out of range");
  cplx acc{};
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      acc += omega_pow(d, static_cast<long long>(a * k + b * l)) * t(a, b, x, y);
  return acc;
}

CorrelationTable table_from_realization(const Ket& state, const std::vector<Povm>& alice,
                                        const std::vector<Povm>& bob) {
  if (alice.empty() || bob.empty()) throw SizeError("table_from_realization: no measurement settings");
  const std::size_t d = alice[0].size();
  for (const auto& m : alice)
    if (m.size() != d || m.dim() != alice[0].dim()) throw SizeError("table_from_realization: Alice settings differ");
  for (const auto& m : bob)
    if (m.size() != d || m.dim() != bob[0].dim()) throw SizeError("table_from_realization: Bob settings differ");

  auto g = split_abe(state.factor_dims(), alice[0].dim(), bob[0].dim());
  Ket grouped(state.vec(), {g[0], g[1], g[2]}, 1e-8);
  const std::size_t keep[] = {0, 1};
  ComplexMatrix rho = reduced_density(grouped, keep);
  const std::size_t da = g[0], db = g[1];

  std::vector<double> p(alice.size() * bob.size() * d * d);
  for (std::size_t x = 0; x < alice.size(); ++x)
    for (std::size_t y = 0; y < bob.size(); ++y)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          const ComplexMatrix& m = alice[x][a];
          const ComplexMatrix& nb = bob[y][b];
          cplx acc{};
          for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < da; ++j) {
              cplx mji = m(j, i);
              if (mji == cplx{}) continue;
              for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l) acc += rho(i * db + k, j * db + l) * mji * nb(l, k);
            }
          p[((x * bob.size() + y) * d + a) * d + b] = acc.real();
        }
  return CorrelationTable(d, alice.size(), bob.size(), std::move(p));
}

}  // namespace steercert
