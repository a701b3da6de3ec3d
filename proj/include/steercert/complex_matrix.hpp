#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace steercert {

using cplx = std::complex<double>;

// Absolute tolerance for invariant checks unless a caller passes its own.
inline constexpr double kDefaultTol = 1e-9;

// Upper bound on any single matrix dimension produced by tensor products.
inline constexpr std::size_t kDefaultDimCap = 4096;

// Dense complex matrix, row-major. Entries are validated finite on
// construction from raw data; arithmetic results are trusted.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);
  // |u><v|
  static ComplexMatrix outer(std::span<const cplx> u, std::span<const cplx> v);
  // Column vector holding v.
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::vector<cplx> column_vector(std::size_t c) const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  cplx trace() const;
  double frobenius_norm() const;
  // ||M - M^dagger||_F
  double hermiticity_residual() const;
  bool is_hermitian(double tol = kDefaultTol) const;
  // Non-negative integer power by repeated squaring; power(0) is the identity.
  ComplexMatrix power(unsigned k) const;
  // Returns M v.
  std::vector<cplx> apply(std::span<const cplx> v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// Largest |a_ij - b_ij|; throws SizeError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// ||a - b||_F
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace steercert
