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

#include <cstdint>
#include <functional>

#include "qsg/linalg.hpp"

namespace qsg {

// Vectorization convention
// ------------------------
// Operators are vectorized by stacking columns:
//
//     vec(ρ)[i + j*d] = ρ[i, j]
//
// so the two-sided map ρ ↦ AρB has the superoperator matrix Bᵀ ⊗ A.
// Every superoperator in this library uses this convention; JSON files
// store the resulting d²×d² matrix row-major like any other matrix.
//
// The Choi matrix of a map Q is
//
//     C[k*d + i, l*d + j] = ⟨e_i| Q(E_{k,l}) |e_j⟩,   E_{k,l} = |e_k⟩⟨e_l|,
//
// i.e. C = Σ_{k,l} E_{k,l} ⊗ Q(E_{k,l}). The identity map has Choi |Ω⟩⟨Ω|
// with Ω = Σ_i e_i ⊗ e_i, the transpose map has Choi SWAP.

CVector vec(const CMatrix& rho);
CMatrix unvec(std::span<const cplx> v, std::size_t dim);

// |e_row⟩⟨e_col| on a d-dimensional space.
class MatrixUnit {
 public:
  MatrixUnit(std::size_t row, std::size_t col, std::size_t dim);

  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }
  std::size_t dim() const { return dim_; }
  CMatrix matrix() const;

 private:
  std::size_t row_;
  std::size_t col_;
  std::size_t dim_;
};

class SuperOperator {
 public:
  // mat must be d²×d².
  SuperOperator(std::size_t dim, CMatrix mat);

  static SuperOperator identity(std::size_t dim);
  static SuperOperator zero(std::size_t dim);
  // ρ ↦ AρB
  static SuperOperator two_sided(const CMatrix& a, const CMatrix& b);
  // ρ ↦ Aρ
  static SuperOperator left(const CMatrix& a);
  // ρ ↦ ρB
  static SuperOperator right(const CMatrix& b);
  // ρ ↦ ρᵀ
  static SuperOperator transpose_map(std::size_t dim);
  // The map determined by its values on all d² matrix units.
  static SuperOperator from_action(std::size_t dim, const std::function<CMatrix(const MatrixUnit&)>& action);

  std::size_t dim() const { return dim_; }
  const CMatrix& matrix() const { return mat_; }

  CMatrix apply(const CMatrix& rho) const;

  SuperOperator& operator+=(const SuperOperator& other);
  SuperOperator& operator-=(const SuperOperator& other);

  friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
  friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
  friend SuperOperator operator*(cplx s, SuperOperator a) {
    a.mat_ *= s;
    return a;
  }

 private:
  std::size_t dim_;
  CMatrix mat_;
};

class ChoiMatrix {
 public:
  ChoiMatrix(std::size_t dim, CMatrix mat);

  std::size_t dim() const { return dim_; }
  const CMatrix& matrix() const { return mat_; }

 private:
  std::size_t dim_;
  CMatrix mat_;
};

ChoiMatrix to_choi(const SuperOperator& s);
SuperOperator from_choi(const ChoiMatrix& c);

// Result of a Choi-spectrum positivity test. On failure the witness is the
// offending eigenvector reshaped into a d×d matrix W with
// W[i, k] = v[k*d + i].
struct PositivityReport {
  bool ok;
  double min_eigenvalue;
  // ‖C − C†‖_F / max(1, ‖C‖_F); a map that is not Hermiticity preserving
  // cannot be (conditionally) completely positive.
  double hermiticity_residual;
  CMatrix witness;
};

// Complete positivity: Choi matrix PSD within psd_tol.
PositivityReport is_completely_positive(const SuperOperator& s, const Tolerances& tol = {});

// Conditional complete positivity: the Choi matrix compressed to the
// orthogonal complement of Ω = Σ_i e_i ⊗ e_i is PSD within psd_tol.
// Orthogonality to Ω is the constraint Σ_k ⟨φ_k|ψ_k⟩ = 0.
PositivityReport is_conditionally_cp(const SuperOperator& gen, const Tolerances& tol = {});

// ‖S(ρ)† − S(ρ†)‖ over all matrix units, relative to ‖S‖_F.
double hermiticity_preservation_residual(const SuperOperator& s);

struct Lemma1Report {
  std::size_t trials = 0;
  // max over samples of ⟨φ|𝓛(|φ⟩⟨φ|)|φ⟩ (should be ≤ psd_tol)
  double max_diagonal = 0.0;
  // min over samples of ⟨ψ|𝓛(|φ⟩⟨φ|)|ψ⟩ with ψ ⊥ φ (should be ≥ −psd_tol)
  double min_off_diagonal = 0.0;
  std::size_t diagonal_violations = 0;
  std::size_t off_diagonal_violations = 0;

  bool ok() const { return diagonal_violations == 0 && off_diagonal_violations == 0; }
};

// Samples random unit φ and random unit ψ ⊥ φ and evaluates the two
// pointwise positivity conditions every generator of a positive,
// trace-preserving semigroup satisfies.
Lemma1Report check_lemma1_pointwise(const SuperOperator& gen, std::size_t trials, std::uint64_t seed,
                                    const Tolerances& tol = {});

struct TraceReport {
  bool ok;
  // max_{k,l} |Tr 𝓛(E_{k,l})|
  double max_residual;
};

TraceReport check_trace_annihilation(const SuperOperator& gen, const Tolerances& tol = {});

}  // namespace qsg
