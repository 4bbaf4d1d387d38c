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

#include <optional>
#include <vector>

#include "qsg/random.hpp"
#include "qsg/superop.hpp"

namespace qsg {

// A generator in standard form
//
//     𝓛(ρ) = Σ_k L_k ρ L_k† − Mρ − ρM†,    Σ_k L_k†L_k = M + M†.
//
// M is stored directly; it has no canonical split into a Hamiltonian and a
// dissipative part. The jump list order matters for serialization only:
// two forms related by a unitary mixing of the L_k give the same generator.
//
// Construction only checks shapes. Form equality and accretivity are
// checked by build_generator() and the verify_* functions, so a violating
// form can still be inspected and reported on.
class StandardForm {
 public:
  StandardForm(CMatrix m, std::vector<CMatrix> kraus, std::optional<std::size_t> chi_index = std::nullopt);

  std::size_t dim() const { return m_.rows(); }
  const CMatrix& m() const { return m_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  const std::optional<std::size_t>& chi_index() const { return chi_index_; }

  // (M − M†)/(2i); equals H for forms built by from_hamiltonian_jumps.
  CMatrix effective_hamiltonian() const;

 private:
  CMatrix m_;
  std::vector<CMatrix> kraus_;
  std::optional<std::size_t> chi_index_;
};

// ‖Σ_k L_k†L_k − M − M†‖_F
// Nonzero entry of a sparse operator. Repeated (row, col) pairs add up.
struct SparseEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

using SparseOperator = std::vector<SparseEntry>;

// A standard form with M and the L_k held as entry lists. Lattice models
// with d ≈ 10³ sites and as many jumps only fit in memory this way.
class SparseForm {
 public:
  SparseForm(std::size_t dim, SparseOperator m, std::vector<SparseOperator> kraus);
  static SparseForm from_dense(const StandardForm& sf);

  std::size_t dim() const { return dim_; }
  const SparseOperator& m() const { return m_; }
  const std::vector<SparseOperator>& kraus() const { return kraus_; }

  StandardForm to_dense() const;
  CMatrix dense_m() const;
  // Σ_k L_k†L_k
  CMatrix jump_gram() const;

 private:
  std::size_t dim_;
  SparseOperator m_;
  std::vector<SparseOperator> kraus_;
};

double verify_form_equality(const StandardForm& sf);
// max(1, ‖M + M†‖_F), the scale form equality is measured against.
double verify_form_equality(const SparseForm& sf);
double form_equality_scale(const StandardForm& sf);
// Smallest eigenvalue of M + M†; non-negative iff M is accretive.
double accretivity_margin(const StandardForm& sf);
double accretivity_margin(const SparseForm& sf);

// The superoperator ρ ↦ Mρ + ρM†.
SuperOperator mover_superoperator(const CMatrix& m);

// Superoperator of Σ_k L_k ρ L_k† − Mρ − ρM†.
// Throws ValidationError when form equality fails beyond
// eq_tol·form_equality_scale, since such a generator does not annihilate
// the trace.
SuperOperator build_generator(const StandardForm& sf, const Tolerances& tol = {});

// M = iH + ½ Σ_k L_k†L_k. Throws ValidationError if H is not Hermitian
// within eq_tol (relative).
StandardForm from_hamiltonian_jumps(const CMatrix& h, const std::vector<CMatrix>& jumps,
                                    const Tolerances& tol = {});

struct RelativeBoundReport {
  std::size_t samples = 0;
  // max_φ |Σ_k ‖L_kφ‖² − ⟨φ|(M + M†)|φ⟩|
  double max_identity_residual = 0.0;
  // max_φ (Σ_k ‖L_kφ‖² − 2‖φ‖‖Mφ‖); non-positive when the bound holds
  double max_bound_slack = 0.0;
  std::size_t violations = 0;

  bool ok() const { return violations == 0; }
};

// For each φ checks Σ_k ‖L_kφ‖² = 2 Re⟨φ|Mφ⟩ ≤ 2‖φ‖‖Mφ‖, which is how each
// L_k is bounded relative to M.
RelativeBoundReport check_relative_bound(const StandardForm& sf, std::span<const CVector> samples,
                                         const Tolerances& tol = {});
RelativeBoundReport check_relative_bound(const StandardForm& sf, std::size_t samples, std::uint64_t seed,
                                         const Tolerances& tol = {});

}  // namespace qsg
