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
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsg/stdform.hpp"

namespace qsg {

// Raised when a decomposition precondition fails. Carries the name of the
// failed check, the offending value and, for positivity failures, the Choi
// witness reshaped to d×d.
class DecompositionError : public ValidationError {
 public:
  DecompositionError(std::string check, double value, std::optional<CMatrix> witness, const std::string& message)
      : ValidationError(message), check_(std::move(check)), value_(value), witness_(std::move(witness)) {}

  const std::string& check() const { return check_; }
  double value() const { return value_; }
  const std::optional<CMatrix>& witness() const { return witness_; }

 private:
  std::string check_;
  double value_;
  std::optional<CMatrix> witness_;
};

//=========================================================================
// Contraction generator and expander
//=========================================================================

// Builds M column by column from a reference unit vector χ:
//
//     Mψ = −𝓛(|ψ⟩⟨χ|)χ + ½⟨χ|𝓛(|χ⟩⟨χ|)|χ⟩ ψ,   ψ = e_0, …, e_{d−1}.
//
// Throws std::invalid_argument if |‖χ‖ − 1| > eq_tol.
CMatrix extract_M(const SuperOperator& gen, std::span<const cplx> chi, const Tolerances& tol = {});

// 𝓛₊ = 𝓛 + 𝓜 with 𝓜(ρ) = Mρ + ρM†. Completely positive when M comes
// from extract_M of a valid generator.
SuperOperator expander(const SuperOperator& gen, const CMatrix& m);

//=========================================================================
// Gram data and the α-ordered factorization
//=========================================================================

// Rank function on index pairs. With 1-based positions p, q and
// n = max(p, q), a pair is ranked n² − n + p − q, which enumerates the
// pairs shell by shell:
//
//     (1,1) → 0;  (1,2) → 1, (2,2) → 2, (2,1) → 3;  (1,3) → 4, …
//
// The basis may be cycled by `shift` so that the first position holds a
// basis vector with a non-vanishing diagonal Gram entry; basis index i sits
// at 0-based position (i − shift) mod d.
class PairOrdering {
 public:
  explicit PairOrdering(std::size_t dim, std::size_t shift = 0);

  std::size_t dim() const { return dim_; }
  std::size_t shift() const { return shift_; }
  std::size_t size() const { return dim_ * dim_; }

  // α(i, k) for basis indices i, k.
  std::size_t rank(std::size_t i, std::size_t k) const { return rank_[i * dim_ + k]; }
  // Inverse of rank: the basis index pair (i, k) with α(i, k) = alpha.
  std::pair<std::size_t, std::size_t> pair(std::size_t alpha) const { return pairs_[alpha]; }

 private:
  std::size_t dim_;
  std::size_t shift_;
  std::vector<std::size_t> rank_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

// G[α(i,k), α(j,l)] = ⟨e_i| Q(E_{k,l}) |e_j⟩, the Gram matrix of the vectors
// Φ_{i,k}. It is the Choi matrix with rows and columns permuted into
// α-order, so it is PSD exactly when Q is completely positive.
class GramMatrix {
 public:
  GramMatrix(const SuperOperator& q, const PairOrdering& ord);

  std::size_t dim() const { return dim_; }
  const CMatrix& matrix() const { return mat_; }

 private:
  std::size_t dim_;
  CMatrix mat_;
};

// Lower-triangular γ with Φ_α = Σ_{β ≤ α} γ_{α,β} b_β, hence
//
//     G[β, α] = ⟨Φ_β|Φ_α⟩ = Σ_{β'} conj(γ_{β,β'}) γ_{α,β'},
//
// i.e. conj(γ)·γᵀ = G. Columns of rejected pivots are identically zero.
struct CholeskyFactor {
  CMatrix gamma;
  std::vector<std::size_t> rejected_pivots;
};

struct KrausSet {
  std::size_t dim;
  std::vector<CMatrix> operators;

  CMatrix apply(const CMatrix& rho) const;
  SuperOperator to_superoperator() const;
};

// Picks the smallest cyclic shift whose leading diagonal Gram entry
// ⟨e_s|Q(E_{s,s})|e_s⟩ exceeds the pivot threshold; shift 0 if none does.
PairOrdering choose_ordering(const SuperOperator& q, const Tolerances& tol = {});

// Factorizes G in α-order by the Gram-Schmidt-like recursion
//
//     γ_{α,β} = (G[β,α] − Σ_{β'<β} conj(γ_{β,β'}) γ_{α,β'}) / γ_{β,β},
//     γ_{α,α} = sqrt(G[α,α] − Σ_{β<α} |γ_{α,β}|²),
//
// rejecting pivot β (γ_{β,β} = 0, column β zeroed) when γ_{β,β}² falls
// below pivot_tol·Tr G. Each accepted pivot α yields the Kraus operator
// K_α[i, k] = conj(γ_{α(i,k), α}), normalized so that its largest-modulus
// entry is real positive.
//
// Throws ValidationError if G has an eigenvalue below −psd_tol or a pivot
// comes out negative beyond the slack.
std::pair<CholeskyFactor, KrausSet> cholesky_kraus(const GramMatrix& g, const PairOrdering& ord,
                                                   const Tolerances& tol = {});

// Independent route: eigendecompose the Choi matrix and take
// K = sqrt(λ)·unvec(v) for each eigenvalue above pivot_tol·Tr C.
KrausSet spectral_kraus_oracle(const ChoiMatrix& c, const Tolerances& tol = {});

// Multiplies k by a phase so that its largest-modulus entry (first in
// row-major order on ties) is real and positive.
CMatrix normalize_phase(CMatrix k);

//=========================================================================
// Full pipeline
//=========================================================================

// Recovers a standard form (M, {L_k}) from a generator:
//   1. check trace annihilation and conditional complete positivity,
//   2. M = extract_M(gen, χ), 𝓛₊ = expander(gen, M), check 𝓛₊ is CP,
//   3. L_k from cholesky_kraus on the Gram matrix of 𝓛₊,
//   4. check form equality and that rebuilding reproduces gen.
// Every failed check raises DecompositionError naming the check.
StandardForm decompose_generator(const SuperOperator& gen, std::span<const cplx> chi, const Tolerances& tol = {},
                                 std::optional<std::size_t> chi_index = std::nullopt);
// χ = e_{chi_index}; the index is recorded in the result.
StandardForm decompose_generator(const SuperOperator& gen, std::size_t chi_index = 0, const Tolerances& tol = {});

//=========================================================================
// Expander inequalities
//=========================================================================

// Each check samples random inputs and records lhs − rhs for an inequality
// lhs ≤ rhs. The slack is measured relative to max(1, rhs) and a sample
// counts as a violation when it exceeds eq_tol.
struct InequalityReport {
  std::size_t samples = 0;
  double max_slack = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

// ‖𝓛₊(|φ⟩⟨ψ|)‖₁ ≤ sqrt(‖𝓛₊(|φ⟩⟨φ|)‖₁ · ‖𝓛₊(|ψ⟩⟨ψ|)‖₁) for random unit φ, ψ.
InequalityReport check_schwarz_bound(const SuperOperator& plus, std::size_t samples, std::uint64_t seed,
                                     const Tolerances& tol = {});

struct GraphContinuityReport {
  InequalityReport mover;
  InequalityReport expander;
  bool ok() const { return mover.ok() && expander.ok(); }
};

// For random unit φ, ψ, a random ε ∈ [1e−6, 1] (log-uniform) and
// perturbations e = φ + δ, f = ψ + δ' with ‖δ‖, ‖Mδ‖, ‖δ'‖, ‖Mδ'‖ ≤ ε:
//   ‖𝓧(|φ⟩⟨ψ|) − 𝓧(|e⟩⟨f|)‖₁ ≤ ε(‖φ‖ + ‖Mφ‖ + ‖ψ‖ + ‖Mψ‖ + 2ε)
// for 𝓧 = 𝓜 and 𝓧 = 𝓛₊.
GraphContinuityReport check_graph_continuity(const SuperOperator& plus, const CMatrix& m, std::size_t samples,
                                             std::uint64_t seed, const Tolerances& tol = {});

struct TraceDominationReport {
  std::size_t samples = 0;
  // max |Tr 𝓛₊(ρ) − Tr 𝓜(ρ)| relative to max(1, ‖𝓜(ρ)‖₁)
  double max_trace_mismatch = 0.0;
  // most negative Tr 𝓛₊(ρ) and largest Tr 𝓜(ρ) − ‖𝓜(ρ)‖₁, same scaling
  double min_trace = std::numeric_limits<double>::infinity();
  double max_norm_excess = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

// 0 ≤ Tr 𝓛₊(ρ) = Tr 𝓜(ρ) ≤ ‖𝓜(ρ)‖₁ on random density matrices of random
// rank.
TraceDominationReport check_trace_domination(const SuperOperator& plus, const CMatrix& m, std::size_t samples,
                                             std::uint64_t seed, const Tolerances& tol = {});

}  // namespace qsg
