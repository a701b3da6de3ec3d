#include "steercert/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "steercert/error.hpp"

namespace steercert {

namespace {

using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ECMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::Map<const EMat> view(const ComplexMatrix& m) {
  return Eigen::Map<const EMat>(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                static_cast<Eigen::Index>(m.cols()));
}

template <class Derived>
ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& e) {
  ComplexMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index r = 0; r < e.rows(); ++r)
    for (Eigen::Index c = 0; c < e.cols(); ++c) m(r, c) = e(r, c);
  return m;
}

std::size_t checked_product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw SizeError("factor dimension must be positive");
    p *= d;
  }
  return p;
}

std::vector<std::size_t> validated_keep(std::span<const std::size_t> keep, std::size_t nfactors) {
  std::vector<std::size_t> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] >= nfactors) {
      throw IndexError("partial_trace: factor " + std::to_string(k[i]) + " out of range for " +
                       std::to_string(nfactors) + " factors");
    }
    if (i > 0 && k[i] == k[i - 1]) throw IndexError("partial_trace: duplicate factor in keep set");
  }
  return k;
}

// Splits each composite index into (kept index, traced index).
struct IndexSplit {
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
};

IndexSplit split_indices(std::span<const std::size_t> dims, const std::vector<std::size_t>& keep) {
  IndexSplit s;
  std::vector<bool> is_kept(dims.size(), false);
  for (std::size_t k : keep) is_kept[k] = true;
  for (std::size_t f = 0; f < dims.size(); ++f) (is_kept[f] ? s.kept_dim : s.traced_dim) *= dims[f];
  std::size_t n = s.kept_dim * s.traced_dim;
  s.kept.resize(n);
  s.traced.resize(n);
  std::vector<std::size_t> digit(dims.size(), 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (is_kept[f]) ki = ki * dims[f] + digit[f];
      else ti = ti * dims[f] + digit[f];
    }
    s.kept[idx] = ki;
    s.traced[idx] = ti;
    for (std::size_t f = dims.size(); f-- > 0;) {
      if (++digit[f] < dims[f]) break;
      digit[f] = 0;
    }
  }
  return s;
}

void phase_fix(ComplexMatrix& v, std::size_t col) {
  for (std::size_t r = 0; r < v.rows(); ++r) {
    cplx z = v(r, col);
    if (std::abs(z) > 1e-8) {
      cplx ph = std::conj(z) / std::abs(z);
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) *= ph;
      return;
    }
  }
}

// Replaces columns [begin, end) with a canonical orthonormal basis of their span.
void canonicalize_group(ComplexMatrix& v, std::size_t begin, std::size_t end) {
  std::size_t n = v.rows();
  std::size_t k = end - begin;
  std::vector<std::vector<cplx>> basis;
  for (std::size_t i = 0; i < n && basis.size() < k; ++i) {
    std::vector<cplx> w(n);
    for (std::size_t c = begin; c < end; ++c) {
      cplx coef = std::conj(v(i, c));
      for (std::size_t r = 0; r < n; ++r) w[r] += v(r, c) * coef;
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        cplx proj = inner(b, w);
        for (std::size_t r = 0; r < n; ++r) w[r] -= proj * b[r];
      }
    }
    double nw = norm(w);
    if (nw < 1e-4) continue;
    for (cplx& z : w) z /= nw;
    basis.push_back(std::move(w));
  }
  if (basis.size() != k) throw ContractError("hermitian_eig: failed to rebuild degenerate eigenspace");
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t r = 0; r < n; ++r) v(r, begin + j) = basis[j][r];
}

}  // namespace

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t dim_cap) {
  std::size_t rows = a.rows() * b.rows();
  std::size_t cols = a.cols() * b.cols();
  if (rows > dim_cap || cols > dim_cap) {
    throw SizeError("tensor: result " + std::to_string(rows) + "x" + std::to_string(cols) + " exceeds cap " +
                    std::to_string(dim_cap));
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      cplx s = a(i, j);
      if (s == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return m;
}

ComplexMatrix tensor(std::span<const ComplexMatrix> factors, std::size_t dim_cap) {
  if (factors.empty()) return ComplexMatrix::identity(1);
  ComplexMatrix m = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) m = tensor(m, factors[i], dim_cap);
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> keep) {
  std::size_t n = checked_product(factor_dims);
  if (m.rows() != n || m.cols() != n) {
    throw SizeError("partial_trace: factor dimensions multiply to " + std::to_string(n) + " but matrix is " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  IndexSplit s = split_indices(factor_dims, validated_keep(keep, factor_dims.size()));
  std::vector<std::vector<std::size_t>> by_traced(s.traced_dim);
  for (std::size_t idx = 0; idx < n; ++idx) by_traced[s.traced[idx]].push_back(idx);
  ComplexMatrix out(s.kept_dim, s.kept_dim);
  for (const auto& group : by_traced)
    for (std::size_t r : group)
      for (std::size_t c : group) out(s.kept[r], s.kept[c]) += m(r, c);
  return out;
}

ComplexMatrix reduced_density(const Ket& psi, std::span<const std::size_t> keep) {
  const auto& dims = psi.factor_dims();
  IndexSplit s = split_indices(dims, validated_keep(keep, dims.size()));
  // Psi[kept][traced]
  ComplexMatrix amp(s.kept_dim, s.traced_dim);
  for (std::size_t idx = 0; idx < psi.dim(); ++idx) amp(s.kept[idx], s.traced[idx]) = psi[idx];
  return amp * amp.adjoint();
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> factor_dims, std::size_t index) {
  if (index >= factor_dims.size()) throw IndexError("embed: factor index out of range");
  if (op.rows() != factor_dims[index] || op.cols() != factor_dims[index]) {
    throw SizeError("embed: operator does not match factor dimension");
  }
  std::size_t left = 1, right = 1;
  for (std::size_t f = 0; f < index; ++f) left *= factor_dims[f];
  for (std::size_t f = index + 1; f < factor_dims.size(); ++f) right *= factor_dims[f];
  ComplexMatrix m = tensor(ComplexMatrix::identity(left), op);
  return tensor(m, ComplexMatrix::identity(right));
}

std::vector<cplx> apply_on_factor(const ComplexMatrix& op, std::span<const cplx> psi,
                                  std::span<const std::size_t> factor_dims, std::size_t index) {
  if (index >= factor_dims.size()) throw IndexError("apply_on_factor: factor index out of range");
  std::size_t d = factor_dims[index];
  if (op.rows() != d || op.cols() != d) throw SizeError("apply_on_factor: operator does not match factor");
  if (checked_product(factor_dims) != psi.size()) throw SizeError("apply_on_factor: state size mismatch");
  std::size_t left = 1, right = 1;
  for (std::size_t f = 0; f < index; ++f) left *= factor_dims[f];
  for (std::size_t f = index + 1; f < factor_dims.size(); ++f) right *= factor_dims[f];
  std::vector<cplx> out(psi.size());
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        cplx a = op(i, j);
        if (a == cplx{}) continue;
        const cplx* src = psi.data() + (l * d + j) * right;
        cplx* dst = out.data() + (l * d + i) * right;
        for (std::size_t r = 0; r < right; ++r) dst[r] += a * src[r];
      }
  return out;
}

EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol) {
  if (!m.is_square()) throw SizeError("hermitian_eig: matrix not square");
  double scale = std::max(1.0, m.frobenius_norm());
  double res = m.hermiticity_residual();
  if (res > herm_tol * scale) {
    throw ContractError("hermitian_eig: input not Hermitian (residual " + std::to_string(res) + ")");
  }
  std::size_t n = m.rows();
  ECMat sym = (view(m) + view(m).adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ECMat> solver(sym);
  if (solver.info() != Eigen::Success) throw ContractError("hermitian_eig: solver did not converge");

  EigResult out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto src = static_cast<Eigen::Index>(n - 1 - j);
    out.values[j] = solver.eigenvalues()(src);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = solver.eigenvectors()(static_cast<Eigen::Index>(r), src);
  }

  double spread = n == 0 ? 0.0 : std::max(std::abs(out.values.front()), std::abs(out.values.back()));
  double gap_tol = 1e-9 * std::max(1.0, spread);
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && out.values[end - 1] - out.values[end] <= gap_tol) ++end;
    if (end - begin > 1) canonicalize_group(out.vectors, begin, end);
    for (std::size_t c = begin; c < end; ++c) phase_fix(out.vectors, c);
    begin = end;
  }
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ECMat> solver(ECMat(view(m)), Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.u = from_eigen(solver.matrixU());
  out.v = from_eigen(solver.matrixV());
  out.s.assign(solver.singularValues().data(), solver.singularValues().data() + solver.singularValues().size());
  return out;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  SvdResult r = svd(m);
  if (r.s.empty() || r.s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(r.s.begin(), r.s.end(), [&](double s) { return s > rel_tol * r.s.front(); }));
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  if (!m.is_square()) throw SizeError("polar_unitary: matrix not square");
  SvdResult r = svd(m);
  return r.u * r.v.adjoint();
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  EigResult e = hermitian_eig(m);
  std::vector<double> s(e.values.size());
  std::transform(e.values.begin(), e.values.end(), s.begin(), [](double x) { return std::sqrt(std::max(x, 0.0)); });
  return e.vectors * ComplexMatrix::diagonal(std::span<const double>(s)) * e.vectors.adjoint();
}

ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& m, double rel_tol) {
  EigResult e = hermitian_eig(m);
  double top = e.values.empty() ? 0.0 : std::max(e.values.front(), 0.0);
  std::vector<double> s(e.values.size());
  std::transform(e.values.begin(), e.values.end(), s.begin(),
                 [&](double x) { return x > rel_tol * top && x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; });
  return e.vectors * ComplexMatrix::diagonal(std::span<const double>(s)) * e.vectors.adjoint();
}

double unitarity_residual(const ComplexMatrix& m) {
  if (!m.is_square()) throw SizeError("unitarity_residual: matrix not square");
  SvdResult r = svd(m);
  double acc = 0.0;
  for (double s : r.s) acc += (s - 1.0) * (s - 1.0);
  return std::sqrt(acc);
}

double operator_norm(const ComplexMatrix& m) {
  SvdResult r = svd(m);
  return r.s.empty() ? 0.0 : r.s.front();
}

std::array<std::size_t, 3> split_abe(std::span<const std::size_t> factor_dims, std::size_t dim_a,
                                     std::size_t dim_b) {
  std::size_t f = 0;
  auto take = [&](std::size_t want) {
    std::size_t p = 1;
    while (p < want && f < factor_dims.size()) p *= factor_dims[f++];
    if (p != want) {
      throw SizeError("operator dimension " + std::to_string(want) + " does not align with the state factors");
    }
    return p;
  };
  std::size_t a = take(dim_a);
  std::size_t b = take(dim_b);
  std::size_t rest = 1;
  for (; f < factor_dims.size(); ++f) rest *= factor_dims[f];
  return {a, b, rest};
}

cplx local_expectation(const Ket& psi, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square()) throw SizeError("local_expectation: operators must be square");
  auto g = split_abe(psi.factor_dims(), a.rows(), b.rows());
  std::vector<cplx> w = apply_on_factor(a, psi.amplitudes(), g, 0);
  w = apply_on_factor(b, w, g, 1);
  return inner(psi.amplitudes(), w);
}

}  // namespace steercert
