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

#include "qsg/linalg.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsg {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::Map<const RowMat> view(const CMatrix& a) {
  return {a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

Eigen::Map<RowMat> view(CMatrix& a) {
  return {a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

template <typename Derived>
CMatrix from_eigen(const Eigen::MatrixBase<Derived>& m) {
  CMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  view(out) = m;
  return out;
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

void require_square(const CMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
}

void require_finite(const CMatrix& a, const char* what) {
  if (!a.all_finite()) {
    throw NumericalError(std::string(what) + ": non-finite entries");
  }
}

// Exact Hermiticity up to a few ulps of the norm.
bool is_numerically_hermitian(const CMatrix& a) {
  if (!a.is_square()) return false;
  const double scale = a.frobenius_norm();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      acc += std::norm(a(i, j) - std::conj(a(j, i)));
    }
  }
  return std::sqrt(acc) <= 1e-14 * std::max(1.0, scale);
}

}  // namespace

void Tolerances::validate() const {
  if (!(eq_tol > 0.0) || !(psd_tol > 0.0) || !(pivot_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

//-------------------------------------------------------------------------
// CMatrix
//-------------------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("CMatrix: rows and cols must be at least 1");
  }
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("CMatrix: rows and cols must be at least 1");
  }
  if (data_.size() != rows * cols) {
    throw DimensionError("CMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(data_.size()));
  }
  require_finite(*this, "CMatrix");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) {
    throw DimensionError("CMatrix: rows and cols must be at least 1");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
  CMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
  return out;
}

CMatrix CMatrix::column(std::span<const cplx> v) {
  return {v.size(), 1, std::vector<cplx>(v.begin(), v.end())};
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

double CMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& x : data_) acc += std::norm(x);
  return std::sqrt(acc);
}

cplx CMatrix::trace() const {
  require_square(*this, "trace");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) acc += (*this)(i, i);
  return acc;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  CMatrix out(a.rows(), b.cols());
  view(out).noalias() = view(a) * view(b);
  return out;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

CMatrix transpose(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

CMatrix conj(const CMatrix& a) {
  CMatrix out = a;
  for (auto& x : out.entries()) x = std::conj(x);
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CMatrix hermitian_part(const CMatrix& a) {
  require_square(a, "hermitian_part");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

double relative_difference(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "relative_difference");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) diff += std::norm(a.entries()[i] - b.entries()[i]);
  const double scale = std::max({1.0, a.frobenius_norm(), b.frobenius_norm()});
  return std::sqrt(diff) / scale;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
  return relative_difference(a, b) <= tol;
}

//-------------------------------------------------------------------------
// Vectors
//-------------------------------------------------------------------------

double norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("inner: length mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

CVector matvec(const CMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw DimensionError("matvec: length mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

CMatrix outer(std::span<const cplx> a, std::span<const cplx> b) {
  CMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

CVector basis_vector(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("basis_vector: index out of range");
  CVector v(dim);
  v[k] = 1.0;
  return v;
}

//-------------------------------------------------------------------------
// Spectral routines
//-------------------------------------------------------------------------

HermitianEigen eig_hermitian(const CMatrix& a) {
  require_square(a, "eig_hermitian");
  require_finite(a, "eig_hermitian");
  const CMatrix h = hermitian_part(a);
  const double residual = (a - h).frobenius_norm();

  Eigen::SelfAdjointEigenSolver<ColMat> solver(ColMat(view(h)));
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver did not converge");

  HermitianEigen out{std::vector<double>(a.rows()), from_eigen(solver.eigenvectors()), residual};
  for (std::size_t i = 0; i < a.rows(); ++i) out.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  return out;
}

std::vector<double> eigvals_hermitian(const CMatrix& a) {
  require_square(a, "eigvals_hermitian");
  require_finite(a, "eigvals_hermitian");
  const CMatrix h = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<ColMat> solver(ColMat(view(h)), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigvals_hermitian: solver did not converge");
  std::vector<double> values(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  return values;
}

CMatrix matrix_exp(const CMatrix& a) {
  require_square(a, "matrix_exp");
  require_finite(a, "matrix_exp");
  const ColMat m = view(a);
  const ColMat e = m.exp();
  CMatrix out = from_eigen(e);
  require_finite(out, "matrix_exp");
  return out;
}

double trace_norm(const CMatrix& a) {
  require_square(a, "trace_norm");
  if (is_numerically_hermitian(a)) {
    const auto values = eigvals_hermitian(a);
    return std::accumulate(values.begin(), values.end(), 0.0,
                           [](double acc, double x) { return acc + std::abs(x); });
  }
  Eigen::BDCSVD<ColMat> svd(ColMat(view(a)));
  return svd.singularValues().sum();
}

double operator_norm(const CMatrix& a) {
  Eigen::BDCSVD<ColMat> svd(ColMat(view(a)));
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace qsg
