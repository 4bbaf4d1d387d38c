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

#include <string_view>

#include "qsg/stdform.hpp"

namespace qsg {

// Lattice models on N grid sites x_j = j·h plus one absorbing sink state ω
// stored at index N, so the Hilbert dimension is N + 1.
//
// Grid convention: a lattice state stores ψ(x_j)·sqrt(h), so the ℓ² norm of
// the lattice vector approximates the L² norm of ψ. A point evaluation ψ(0)
// is then ψ_0 / sqrt(h), which is why the coupling into the sink is
// (1/sqrt(h))|ω⟩⟨e_0|.

enum class DropoutVariant { hopping, upwind };

std::string_view to_string(DropoutVariant v);
DropoutVariant parse_dropout_variant(std::string_view s);

// Translation toward x = 0 followed by drop-out into ω.
//
// hopping: jumps (1/sqrt(h))|e_{j−1}⟩⟨e_j| for j = 1..N−1 and
//   (1/sqrt(h))|ω⟩⟨e_0|, M = 1/(2h) on lattice sites and 0 on ω. Exactly
//   trace preserving; the packet moves by Poisson hopping at rate 1/h.
// upwind: M = −∂_h with (∂_hψ)_j = (ψ_{j+1} − ψ_j)/h and ψ_N ≡ 0, the single
//   jump (1/sqrt(h))|ω⟩⟨e_0|. Form equality only holds to O(h) on smooth
//   states; the leakage is the point of this variant.
struct DropoutModel {
  std::size_t sites;
  double spacing;
  DropoutVariant variant = DropoutVariant::hopping;
};

// Half-line z ≥ 0 with Robin boundary ψ'(0) = wψ(0). Re(w) enters the
// Hermitian three-point Laplacian through the ghost point
// ψ_{−1} = (1 − h·Re w)ψ_0; Im(w) > 0 opens the sticking channel
// sqrt(2·Im(w)/h)|ω⟩⟨e_0|. Dirichlet truncation at z = N·h.
struct StickingModel {
  std::size_t sites;
  double spacing;
  cplx w;
};

// Entry-list forms for propagation at large N; build_* densify these.
SparseForm dropout_operator_form(const DropoutModel& m);
SparseForm sticking_operator_form(const StickingModel& m);

StandardForm build_dropout(const DropoutModel& m);
StandardForm build_sticking(const StickingModel& m);

// Index of the sink state for a model with `sites` lattice sites.
inline std::size_t sink_index(std::size_t sites) { return sites; }

// Normalized lattice state (dimension sites + 1, zero sink amplitude) of
// ψ(x) ∝ exp(−(x − x0)²/(4σ²) + i·k·x), so |ψ|² is a normal density with
// standard deviation σ.
CVector gaussian_packet(std::size_t sites, double spacing, double x0, double sigma, double k = 0.0);

// Continuum samples ψ(x_j) of the same packet, normalized in L²; input for
// dropout_sink_oracle.
CVector gaussian_samples(std::size_t sites, double spacing, double x0, double sigma, double k = 0.0);

// Sink population of the continuum drop-out semigroup at time t for a pure
// initial packet: ∫₀^min(t, N·h) |ψ(x)|² dx by the trapezoidal rule on the
// samples ψ(x_j), x_j = j·h. The endpoint t is interpolated linearly.
double dropout_sink_oracle(std::span<const cplx> samples, double spacing, double t);

// Population ⟨ω|ρ|ω⟩.
double sink_population(const CMatrix& rho);

}  // namespace qsg
