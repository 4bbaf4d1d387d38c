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

#include "qsg/stdform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsg {

StandardForm::StandardForm(CMatrix m, std::vector<CMatrix> kraus, std::optional<std::size_t> chi_index)
    : m_(std::move(m)), kraus_(std::move(kraus)), chi_index_(chi_index) {
  if (!m_.is_square()) throw DimensionError("StandardForm: M must be square");
  for (const auto& l : kraus_) {
    if (l.rows() != dim() || l.cols() != dim()) {
      throw DimensionError("StandardForm: jump operators must be " + std::to_string(dim()) + "x" +
                           std::to_string(dim()));
    }
  }
  if (chi_index_ && *chi_index_ >= dim()) throw DimensionError("StandardForm: chi_index out of range");
}

CMatrix StandardForm::effective_hamiltonian() const {
  return (m_ - adjoint(m_)) * cplx(0.0, -0.5);
}

namespace {

void check_entries(const SparseOperator& op, std::size_t dim) {
  for (const auto& e : op)
    if (e.row >= dim || e.col >= dim) throw DimensionError("SparseForm: entry index out of range");
}

SparseOperator sparsify(const CMatrix& a) {
  SparseOperator op;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != cplx{}) op.push_back({i, j, a(i, j)});
  return op;
}

CMatrix densify(const SparseOperator& op, std::size_t dim) {
  CMatrix a(dim, dim);
  for (const auto& e : op) a(e.row, e.col) += e.value;
  return a;
}

}  // namespace

SparseForm::SparseForm(std::size_t dim, SparseOperator m, std::vector<SparseOperator> kraus)
    : dim_(dim), m_(std::move(m)), kraus_(std::move(kraus)) {
  if (dim_ == 0) throw DimensionError("SparseForm: dimension must be positive");
  check_entries(m_, dim_);
  for (const auto& l : kraus_) check_entries(l, dim_);
}

SparseForm SparseForm::from_dense(const StandardForm& sf) {
  std::vector<SparseOperator> kraus;
  kraus.reserve(sf.kraus().size());
  for (const auto& l : sf.kraus()) kraus.push_back(sparsify(l));
  return {sf.dim(), sparsify(sf.m()), std::move(kraus)};
}

StandardForm SparseForm::to_dense() const {
  std::vector<CMatrix> kraus;
  kraus.reserve(kraus_.size());
  for (const auto& l : kraus_) kraus.push_back(densify(l, dim_));
  return {densify(m_, dim_), std::move(kraus)};
}

CMatrix SparseForm::dense_m() const { return densify(m_, dim_); }

CMatrix SparseForm::jump_gram() const {
  CMatrix acc(dim_, dim_);
  for (const auto& l : kraus_)
    for (const auto& x : l)
      for (const auto& y : l)
        if (x.row == y.row) acc(x.col, y.col) += std::conj(x.value) * y.value;
  return acc;
}

namespace {

CMatrix jump_gram(const StandardForm& sf) {
  CMatrix acc(sf.dim(), sf.dim());
  for (const auto& l : sf.kraus()) acc += adjoint(l) * l;
  return acc;
}

}  // namespace

double verify_form_equality(const StandardForm& sf) {
  return (jump_gram(sf) - sf.m() - adjoint(sf.m())).frobenius_norm();
}

double verify_form_equality(const SparseForm& sf) {
  const CMatrix m = sf.dense_m();
  return (sf.jump_gram() - m - adjoint(m)).frobenius_norm();
}

double form_equality_scale(const StandardForm& sf) {
  return std::max(1.0, (sf.m() + adjoint(sf.m())).frobenius_norm());
}

double accretivity_margin(const StandardForm& sf) {
  return eigvals_hermitian(sf.m() + adjoint(sf.m())).front();
}

double accretivity_margin(const SparseForm& sf) {
  const CMatrix m = sf.dense_m();
  return eigvals_hermitian(m + adjoint(m)).front();
}

SuperOperator mover_superoperator(const CMatrix& m) {
  // ρ ↦ Mρ + ρM†  ≙  I ⊗ M + conj(M) ⊗ I
  const CMatrix id = CMatrix::identity(m.rows());
  return {m.rows(), kron(id, m) + kron(conj(m), id)};
}

SuperOperator build_generator(const StandardForm& sf, const Tolerances& tol) {
  const double residual = verify_form_equality(sf);
  const double scale = form_equality_scale(sf);
  if (residual > tol.eq_tol * scale) {
    std::ostringstream msg;
    msg << "form equality violated: ||sum L^dag L - M - M^dag||_F = " << residual << " exceeds "
        << tol.eq_tol * scale;
    throw ValidationError(msg.str());
  }
  CMatrix mat(sf.dim() * sf.dim(), sf.dim() * sf.dim());
  for (const auto& l : sf.kraus()) mat += kron(conj(l), l);
  mat -= mover_superoperator(sf.m()).matrix();
  return {sf.dim(), std::move(mat)};
}

StandardForm from_hamiltonian_jumps(const CMatrix& h, const std::vector<CMatrix>& jumps, const Tolerances& tol) {
  if (!h.is_square()) throw DimensionError("from_hamiltonian_jumps: H must be square");
  if (relative_difference(h, adjoint(h)) > tol.eq_tol) {
    throw ValidationError("from_hamiltonian_jumps: H is not Hermitian");
  }
  CMatrix m = cplx(0.0, 1.0) * hermitian_part(h);
  for (const auto& l : jumps) {
    if (l.rows() != h.rows() || l.cols() != h.cols()) {
      throw DimensionError("from_hamiltonian_jumps: jump operator shape differs from H");
    }
    m += 0.5 * (adjoint(l) * l);
  }
  return {std::move(m), jumps};
}

RelativeBoundReport check_relative_bound(const StandardForm& sf, std::span<const CVector> samples,
                                         const Tolerances& tol) {
  RelativeBoundReport report;
  report.samples = samples.size();
  report.max_bound_slack = -std::numeric_limits<double>::infinity();
  const CMatrix herm = sf.m() + adjoint(sf.m());
  const double scale = form_equality_scale(sf);

  for (const auto& phi : samples) {
    double jumps = 0.0;
    for (const auto& l : sf.kraus()) jumps += std::pow(norm(matvec(l, phi)), 2);
    const double quad = inner(phi, matvec(herm, phi)).real();
    const double bound = 2.0 * norm(phi) * norm(matvec(sf.m(), phi));

    const double identity_residual = std::abs(jumps - quad);
    const double slack = jumps - bound;
    report.max_identity_residual = std::max(report.max_identity_residual, identity_residual);
    report.max_bound_slack = std::max(report.max_bound_slack, slack);

    const double allowed = tol.eq_tol * scale * std::max(1.0, std::pow(norm(phi), 2));
    if (identity_residual > allowed || slack > allowed) ++report.violations;
  }
  if (samples.empty()) report.max_bound_slack = 0.0;
  return report;
}

RelativeBoundReport check_relative_bound(const StandardForm& sf, std::size_t samples, std::uint64_t seed,
                                         const Tolerances& tol) {
  Rng rng(seed);
  std::vector<CVector> phis;
  phis.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) phis.push_back(random_unit_vector(sf.dim(), rng));
  return check_relative_bound(sf, phis, tol);
}

}  // namespace qsg
