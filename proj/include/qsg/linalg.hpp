// Copyright 2026 The qsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsg {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

//=========================================================================
// Errors
//=========================================================================

// Shape errors: mismatched or empty dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input is well formed but fails a mathematical precondition
// (form equality, complete positivity, trace annihilation, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//=========================================================================
// Tolerances
//=========================================================================

struct Tolerances {
  // relative Frobenius tolerance for matrix equality
  double eq_tol = 1e-10;
  // absolute eigenvalue slack for positive-semidefinite tests
  double psd_tol = 1e-10;
  // pivot rejection threshold in the Kraus factorization, relative to
  // the trace of the Gram matrix
  double pivot_tol = 1e-12;

  // Throws std::invalid_argument unless all tolerances are strictly positive.
  void validate() const;
};

//=========================================================================
// CMatrix
//=========================================================================

// Dense complex matrix, row-major storage, rows and cols at least 1.
class CMatrix {
 public:
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const cplx> diag);
  static CMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> entries() { return data_; }
  std::span<const cplx> entries() const { return data_; }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  double frobenius_norm() const;
  cplx trace() const;
  bool all_finite() const;

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(CMatrix a, cplx s);
// Matrix product; same as matmul.
CMatrix operator*(const CMatrix& a, const CMatrix& b);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
CMatrix transpose(const CMatrix& a);
CMatrix conj(const CMatrix& a);
// Kronecker product, (a ⊗ b)[i*b.rows + k, j*b.cols + l] = a[i,j] b[k,l].
CMatrix kron(const CMatrix& a, const CMatrix& b);
// (a + a†)/2
CMatrix hermitian_part(const CMatrix& a);

// ‖a − b‖_F / max(1, ‖a‖_F, ‖b‖_F)
double relative_difference(const CMatrix& a, const CMatrix& b);
bool approx_equal(const CMatrix& a, const CMatrix& b, double tol);

//=========================================================================
// Vectors
//=========================================================================

double norm(std::span<const cplx> v);
// ⟨a|b⟩, antilinear in a.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
// a·v
CVector matvec(const CMatrix& a, std::span<const cplx> v);
// |a⟩⟨b|
CMatrix outer(std::span<const cplx> a, std::span<const cplx> b);
CVector basis_vector(std::size_t dim, std::size_t k);

//=========================================================================
// Spectral routines
//=========================================================================

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // unitary, columns are eigenvectors
  // ‖a − (a + a†)/2‖_F of the input, i.e. how far it was from Hermitian.
  double symmetrization_residual;
};

// Eigendecomposition of the Hermitian part of a square matrix.
HermitianEigen eig_hermitian(const CMatrix& a);
// Eigenvalues only (ascending); cheaper for large matrices.
std::vector<double> eigvals_hermitian(const CMatrix& a);

// exp(a) by scaling and squaring with a Padé core.
CMatrix matrix_exp(const CMatrix& a);

// Sum of singular values. Hermitian input takes the eigenvalue path.
double trace_norm(const CMatrix& a);
// Largest singular value.
double operator_norm(const CMatrix& a);

}  // namespace qsg
