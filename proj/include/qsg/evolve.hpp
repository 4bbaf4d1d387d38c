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

#include <string>
#include <vector>

#include "qsg/stdform.hpp"

namespace qsg {

struct StepDiagnostics {
  double trace_re;
  // smallest eigenvalue of the Hermitian part of the state
  double min_eig;
  double trace_norm;
};

StepDiagnostics diagnose(const CMatrix& rho);

struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;
  std::vector<StepDiagnostics> diagnostics;
  // Non-fatal remarks, e.g. an initial state that is not a density matrix.
  std::vector<std::string> warnings;
};

// T^t(ρ) = unvec(exp(t·S)·vec(ρ)). Negative t throws std::invalid_argument:
// only the forward semigroup is modeled.
CMatrix propagate(const SuperOperator& gen, const CMatrix& rho0, double t);

// States at each requested time, advancing with exp(Δt·S) between
// consecutive times. times must be strictly increasing with times[0] ≥ 0.
Trajectory trajectory(const SuperOperator& gen, const CMatrix& rho0, std::span<const double> times,
                      const Tolerances& tol = {});

// r(Δ) = ‖(T^Δ(ρ) − ρ)/Δ − 𝓛(ρ)‖₁ for each Δ (positive, strictly
// decreasing). For small Δ the residual is first order, so halving Δ
// should roughly halve r.
std::vector<double> finite_difference_generator(const SuperOperator& gen, const CMatrix& rho,
                                                std::span<const double> deltas);
// r[i+1] / r[i]
std::vector<double> successive_ratios(std::span<const double> values);

// ‖T^{s+t}(ρ) − T^s(T^t(ρ))‖₁
double semigroup_property_check(const SuperOperator& gen, const CMatrix& rho0, double s, double t);

// ‖exp(−tM)‖ (operator norm); at most 1 when M is accretive.
double contraction_norm(const CMatrix& m, double t);

// Generator applied directly in operator form,
//
//     ρ ↦ Σ_k L_k ρ L_k† − Mρ − ρM†,
//
// without materializing the d²×d² superoperator. Intended for lattice
// models where d is in the hundreds to thousands and M, L_k are sparse;
// zero entries are skipped. Form equality is not enforced here, so forms
// that only approximately conserve the trace can be propagated and their
// leakage measured.
//
// Propagation uses exp(Δt·𝓛) on sub-steps of norm at most 4 (in terms of
// an upper bound on ‖𝓛‖), each evaluated by a truncated Taylor series
// whose tail is bounded below double precision.
class OperatorFormGenerator {
 public:
  explicit OperatorFormGenerator(const SparseForm& sf);
  explicit OperatorFormGenerator(const StandardForm& sf);

  std::size_t dim() const { return dim_; }
  // Upper bound on the Frobenius-induced norm of the generator.
  double norm_bound() const { return norm_bound_; }

  CMatrix apply(const CMatrix& rho) const;
  CMatrix propagate(const CMatrix& rho0, double t) const;
  Trajectory trajectory(const CMatrix& rho0, std::span<const double> times, const Tolerances& tol = {}) const;

 private:
  struct Operator {
    SparseOperator entries;
    // dense copy, kept only when the sparse path would be slower
    std::optional<CMatrix> dense;
  };

  CMatrix step(const CMatrix& rho, double dt) const;

  std::size_t dim_;
  Operator m_;
  std::vector<Operator> jumps_;
  double norm_bound_;
};

}  // namespace qsg
