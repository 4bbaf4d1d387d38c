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

#include "qsg/superop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsg/random.hpp"

namespace qsg {

//-------------------------------------------------------------------------
// Vectorization
//-------------------------------------------------------------------------

CVector vec(const CMatrix& rho) {
  CVector v(rho.rows() * rho.cols());
  for (std::size_t j = 0; j < rho.cols(); ++j)
    for (std::size_t i = 0; i < rho.rows(); ++i) v[i + j * rho.rows()] = rho(i, j);
  return v;
}

CMatrix unvec(std::span<const cplx> v, std::size_t dim) {
  if (v.size() != dim * dim) throw DimensionError("unvec: length is not dim²");
  CMatrix out(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) out(i, j) = v[i + j * dim];
  return out;
}

MatrixUnit::MatrixUnit(std::size_t row, std::size_t col, std::size_t dim) : row_(row), col_(col), dim_(dim) {
  if (row >= dim || col >= dim) throw DimensionError("MatrixUnit: index out of range");
}

CMatrix MatrixUnit::matrix() const {
  CMatrix out(dim_, dim_);
  out(row_, col_) = 1.0;
  return out;
}

//-------------------------------------------------------------------------
// SuperOperator
//-------------------------------------------------------------------------

SuperOperator::SuperOperator(std::size_t dim, CMatrix mat) : dim_(dim), mat_(std::move(mat)) {
  if (dim == 0 || mat_.rows() != dim * dim || mat_.cols() != dim * dim) {
    throw DimensionError("SuperOperator: matrix must be d²×d² with d = " + std::to_string(dim));
  }
}

SuperOperator SuperOperator::identity(std::size_t dim) { return {dim, CMatrix::identity(dim * dim)}; }

SuperOperator SuperOperator::zero(std::size_t dim) { return {dim, CMatrix(dim * dim, dim * dim)}; }

SuperOperator SuperOperator::two_sided(const CMatrix& a, const CMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw DimensionError("two_sided: operators must be square with equal dimension");
  }
  return {a.rows(), kron(transpose(b), a)};
}

SuperOperator SuperOperator::left(const CMatrix& a) { return two_sided(a, CMatrix::identity(a.rows())); }

SuperOperator SuperOperator::right(const CMatrix& b) { return two_sided(CMatrix::identity(b.rows()), b); }

SuperOperator SuperOperator::transpose_map(std::size_t dim) {
  return from_action(dim, [](const MatrixUnit& e) { return MatrixUnit(e.col(), e.row(), e.dim()).matrix(); });
}

SuperOperator SuperOperator::from_action(std::size_t dim,
                                         const std::function<CMatrix(const MatrixUnit&)>& action) {
  if (dim == 0) throw DimensionError("from_action: dimension must be positive");
  CMatrix mat(dim * dim, dim * dim);
  for (std::size_t l = 0; l < dim; ++l) {
    for (std::size_t k = 0; k < dim; ++k) {
      const CMatrix image = action(MatrixUnit(k, l, dim));
      if (image.rows() != dim || image.cols() != dim) {
        throw DimensionError("from_action: image of E_{" + std::to_string(k) + "," + std::to_string(l) +
                             "} has the wrong shape");
      }
      // column k + l*d holds vec(image)
      for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) mat(i + j * dim, k + l * dim) = image(i, j);
    }
  }
  return {dim, std::move(mat)};
}

CMatrix SuperOperator::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DimensionError("SuperOperator::apply: state must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
  }
  const CVector v = vec(rho);
  return unvec(qsg::matvec(mat_, v), dim_);
}

SuperOperator& SuperOperator::operator+=(const SuperOperator& other) {
  if (dim_ != other.dim_) throw DimensionError("SuperOperator: dimension mismatch");
  mat_ += other.mat_;
  return *this;
}

SuperOperator& SuperOperator::operator-=(const SuperOperator& other) {
  if (dim_ != other.dim_) throw DimensionError("SuperOperator: dimension mismatch");
  mat_ -= other.mat_;
  return *this;
}

//-------------------------------------------------------------------------
// Choi matrices
//-------------------------------------------------------------------------

ChoiMatrix::ChoiMatrix(std::size_t dim, CMatrix mat) : dim_(dim), mat_(std::move(mat)) {
  if (dim == 0 || mat_.rows() != dim * dim || mat_.cols() != dim * dim) {
    throw DimensionError("ChoiMatrix: matrix must be d²×d²");
  }
}

// Both directions are the same index realignment:
//   S[i + j*d, k + l*d] = C[k*d + i, l*d + j].
ChoiMatrix to_choi(const SuperOperator& s) {
  const std::size_t d = s.dim();
  CMatrix c(d * d, d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) c(k * d + i, l * d + j) = s.matrix()(i + j * d, k + l * d);
  return {d, std::move(c)};
}

SuperOperator from_choi(const ChoiMatrix& c) {
  const std::size_t d = c.dim();
  CMatrix s(d * d, d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s(i + j * d, k + l * d) = c.matrix()(k * d + i, l * d + j);
  return {d, std::move(s)};
}

namespace {

double choi_hermiticity_residual(const CMatrix& c) {
  return (c - adjoint(c)).frobenius_norm() / std::max(1.0, c.frobenius_norm());
}

CMatrix column_as_witness(const CMatrix& vectors, std::size_t column, std::size_t d) {
  CMatrix w(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i) w(i, k) = vectors(k * d + i, column);
  return w;
}

PositivityReport spectrum_report(const CMatrix& compressed, double herm_residual, std::size_t d,
                                 const Tolerances& tol) {
  const HermitianEigen eig = eig_hermitian(compressed);
  const double min_eig = eig.values.front();
  const bool hermitian = herm_residual <= tol.eq_tol;
  const bool ok = hermitian && min_eig >= -tol.psd_tol;
  return {ok, min_eig, herm_residual, column_as_witness(eig.vectors, 0, d)};
}

}  // namespace

PositivityReport is_completely_positive(const SuperOperator& s, const Tolerances& tol) {
  const ChoiMatrix c = to_choi(s);
  return spectrum_report(c.matrix(), choi_hermiticity_residual(c.matrix()), s.dim(), tol);
}

PositivityReport is_conditionally_cp(const SuperOperator& gen, const Tolerances& tol) {
  const std::size_t d = gen.dim();
  const std::size_t n = d * d;
  const ChoiMatrix c = to_choi(gen);

  // P = I − |Ω⟩⟨Ω|/d with Ω = Σ_i e_i ⊗ e_i (unnormalized, ‖Ω‖² = d)
  CMatrix p = CMatrix::identity(n);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) p(a * d + a, b * d + b) -= 1.0 / static_cast<double>(d);

  const CMatrix compressed = p * c.matrix() * p;
  return spectrum_report(compressed, choi_hermiticity_residual(c.matrix()), d, tol);
}

double hermiticity_preservation_residual(const SuperOperator& s) {
  const std::size_t d = s.dim();
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) {
      const MatrixUnit e(k, l, d);
      const CMatrix lhs = adjoint(s.apply(e.matrix()));
      const CMatrix rhs = s.apply(MatrixUnit(l, k, d).matrix());
      acc += std::pow((lhs - rhs).frobenius_norm(), 2);
    }
  }
  return std::sqrt(acc) / std::max(1.0, s.matrix().frobenius_norm());
}

Lemma1Report check_lemma1_pointwise(const SuperOperator& gen, std::size_t trials, std::uint64_t seed,
                                    const Tolerances& tol) {
  if (trials == 0) throw std::invalid_argument("check_lemma1_pointwise: trials must be at least 1");
  const std::size_t d = gen.dim();
  Rng rng(seed);
  Lemma1Report report;
  report.trials = trials;
  report.max_diagonal = -std::numeric_limits<double>::infinity();
  report.min_off_diagonal = std::numeric_limits<double>::infinity();

  for (std::size_t t = 0; t < trials; ++t) {
    const CVector phi = random_unit_vector(d, rng);
    const CMatrix image = gen.apply(outer(phi, phi));

    const double diag = inner(phi, matvec(image, phi)).real();
    report.max_diagonal = std::max(report.max_diagonal, diag);
    if (diag > tol.psd_tol) ++report.diagonal_violations;

    if (d >= 2) {
      const CVector psi = random_orthogonal_unit_vector(phi, rng);
      const double off = inner(psi, matvec(image, psi)).real();
      report.min_off_diagonal = std::min(report.min_off_diagonal, off);
      if (off < -tol.psd_tol) ++report.off_diagonal_violations;
    }
  }
  if (d < 2) report.min_off_diagonal = 0.0;
  return report;
}

TraceReport check_trace_annihilation(const SuperOperator& gen, const Tolerances& tol) {
  const std::size_t d = gen.dim();
  double worst = 0.0;
  // Tr X = Σ_i vec(X)[i + i*d]
  for (std::size_t col = 0; col < d * d; ++col) {
    cplx tr = 0.0;
    for (std::size_t i = 0; i < d; ++i) tr += gen.matrix()(i + i * d, col);
    worst = std::max(worst, std::abs(tr));
  }
  return {worst <= tol.eq_tol, worst};
}

}  // namespace qsg
