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

#include "qsg/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qsg {

namespace {

void require_forward_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": time must be finite and non-negative");
  }
}

void require_state_shape(const CMatrix& rho, std::size_t d, const char* what) {
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError(std::string(what) + ": state must be " + std::to_string(d) + "x" + std::to_string(d));
  }
}

void require_times(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("trajectory: no times given");
  require_forward_time(times.front(), "trajectory");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("trajectory: times must be strictly increasing");
  }
}

std::vector<std::string> initial_state_warnings(const CMatrix& rho0, const Tolerances& tol) {
  std::vector<std::string> warnings;
  const StepDiagnostics diag = diagnose(rho0);
  if (std::abs(rho0.trace() - cplx(1.0)) > tol.eq_tol) {
    std::ostringstream os;
    os << "initial state has trace " << diag.trace_re << ", expected 1";
    warnings.push_back(os.str());
  }
  if (relative_difference(rho0, adjoint(rho0)) > tol.eq_tol) warnings.emplace_back("initial state is not Hermitian");
  if (diag.min_eig < -tol.psd_tol) {
    std::ostringstream os;
    os << "initial state has negative eigenvalue " << diag.min_eig;
    warnings.push_back(os.str());
  }
  return warnings;
}

template <typename Advance>
Trajectory run_trajectory(const CMatrix& rho0, std::span<const double> times, const Tolerances& tol,
                          Advance&& advance) {
  require_times(times);
  Trajectory out;
  out.warnings = initial_state_warnings(rho0, tol);
  out.times.assign(times.begin(), times.end());
  out.states.reserve(times.size());
  out.diagnostics.reserve(times.size());

  CMatrix rho = times.front() > 0.0 ? advance(rho0, times.front()) : rho0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) rho = advance(rho, times[i] - times[i - 1]);
    out.diagnostics.push_back(diagnose(rho));
    out.states.push_back(rho);
  }
  return out;
}

}  // namespace

StepDiagnostics diagnose(const CMatrix& rho) {
  const auto values = eigvals_hermitian(rho);
  // one eigendecomposition serves both numbers when ρ is Hermitian
  const double tn = relative_difference(rho, adjoint(rho)) <= 1e-14
                        ? std::accumulate(values.begin(), values.end(), 0.0,
                                          [](double acc, double x) { return acc + std::abs(x); })
                        : trace_norm(rho);
  return {rho.trace().real(), values.front(), tn};
}

//-------------------------------------------------------------------------
// Dense superoperator propagation
//-------------------------------------------------------------------------

CMatrix propagate(const SuperOperator& gen, const CMatrix& rho0, double t) {
  require_forward_time(t, "propagate");
  require_state_shape(rho0, gen.dim(), "propagate");
  if (t == 0.0) return rho0;
  const CMatrix prop = matrix_exp(t * gen.matrix());
  return unvec(matvec(prop, vec(rho0)), gen.dim());
}

Trajectory trajectory(const SuperOperator& gen, const CMatrix& rho0, std::span<const double> times,
                      const Tolerances& tol) {
  require_state_shape(rho0, gen.dim(), "trajectory");
  // uniform grids reuse a single exponential
  double cached_dt = -1.0;
  std::optional<CMatrix> cached;
  return run_trajectory(rho0, times, tol, [&](const CMatrix& rho, double dt) {
    if (!cached || std::abs(dt - cached_dt) > 1e-14 * dt) {
      cached = matrix_exp(dt * gen.matrix());
      cached_dt = dt;
    }
    return unvec(matvec(*cached, vec(rho)), gen.dim());
  });
}

std::vector<double> finite_difference_generator(const SuperOperator& gen, const CMatrix& rho,
                                                std::span<const double> deltas) {
  require_state_shape(rho, gen.dim(), "finite_difference_generator");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw std::invalid_argument("finite_difference_generator: deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw std::invalid_argument("finite_difference_generator: deltas must be strictly decreasing");
    }
  }
  const CMatrix exact = gen.apply(rho);
  std::vector<double> residuals;
  residuals.reserve(deltas.size());
  for (const double delta : deltas) {
    CMatrix quotient = (propagate(gen, rho, delta) - rho) * cplx(1.0 / delta);
    residuals.push_back(trace_norm(quotient - exact));
  }
  return residuals;
}

std::vector<double> successive_ratios(std::span<const double> values) {
  std::vector<double> ratios;
  for (std::size_t i = 1; i < values.size(); ++i) ratios.push_back(values[i] / values[i - 1]);
  return ratios;
}

double semigroup_property_check(const SuperOperator& gen, const CMatrix& rho0, double s, double t) {
  require_forward_time(s, "semigroup_property_check");
  require_forward_time(t, "semigroup_property_check");
  const CMatrix joint = propagate(gen, rho0, s + t);
  const CMatrix composed = propagate(gen, propagate(gen, rho0, t), s);
  return trace_norm(joint - composed);
}

double contraction_norm(const CMatrix& m, double t) {
  require_forward_time(t, "contraction_norm");
  return operator_norm(matrix_exp(m * cplx(-t)));
}

//-------------------------------------------------------------------------
// Operator-form propagation
//-------------------------------------------------------------------------

namespace {

constexpr double kMaxStepNorm = 4.0;
constexpr double kTaylorTolerance = 1e-17;
constexpr std::size_t kMaxTaylorTerms = 200;

// ‖A‖₂ ≤ sqrt(‖A‖₁ ‖A‖_∞) from absolute row and column sums.
double spectral_norm_bound(std::size_t d, std::span<const cplx> dense) {
  std::vector<double> rows(d, 0.0), cols(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double a = std::abs(dense[i * d + j]);
      rows[i] += a;
      cols[j] += a;
    }
  const double r = d ? *std::max_element(rows.begin(), rows.end()) : 0.0;
  const double c = d ? *std::max_element(cols.begin(), cols.end()) : 0.0;
  return std::sqrt(r * c);
}

}  // namespace

OperatorFormGenerator::OperatorFormGenerator(const StandardForm& sf)
    : OperatorFormGenerator(SparseForm::from_dense(sf)) {}

OperatorFormGenerator::OperatorFormGenerator(const SparseForm& sf) : dim_(sf.dim()), norm_bound_(0.0) {
  const std::size_t d = dim_;
  const double dd = static_cast<double>(d);

  auto prepare = [&](const SparseOperator& entries, bool is_jump) {
    Operator op;
    for (const auto& e : entries)
      if (e.value != cplx{}) op.entries.push_back(e);
    const double nnz = static_cast<double>(op.entries.size());
    // sparse work: jump nnz², mover 2·nnz·d; dense work ~2d³ at a better flop rate
    const bool dense = is_jump ? nnz * nnz > 0.25 * dd * dd * dd : nnz > 0.125 * dd * dd;
    if (dense) {
      CMatrix a(d, d);
      for (const auto& e : op.entries) a(e.row, e.col) += e.value;
      op.dense = std::move(a);
    }
    return op;
  };

  m_ = prepare(sf.m(), false);
  jumps_.reserve(sf.kraus().size());
  for (const auto& l : sf.kraus()) jumps_.push_back(prepare(l, true));

  // ‖J‖_{2→2} ≤ sqrt(‖Σ L†L‖ · ‖Σ LL†‖) for J(ρ) = Σ LρL†
  std::vector<cplx> ldl(d * d), lld(d * d);
  for (const auto& op : jumps_) {
    if (op.dense) {
      const CMatrix a = adjoint(*op.dense) * *op.dense;
      const CMatrix b = *op.dense * adjoint(*op.dense);
      for (std::size_t i = 0; i < d * d; ++i) {
        ldl[i] += a.entries()[i];
        lld[i] += b.entries()[i];
      }
      continue;
    }
    for (const auto& x : op.entries)
      for (const auto& y : op.entries) {
        // (L†L)[x.col, y.col] += conj(L[r, x.col]) L[r, y.col] for matching rows
        if (x.row == y.row) ldl[x.col * d + y.col] += std::conj(x.value) * y.value;
        // (LL†)[x.row, y.row] += L[x.row, c] conj(L[y.row, c]) for matching columns
        if (x.col == y.col) lld[x.row * d + y.row] += x.value * std::conj(y.value);
      }
  }
  const double jump_bound = std::sqrt(spectral_norm_bound(d, ldl) * spectral_norm_bound(d, lld));

  std::vector<double> rows(d, 0.0), cols(d, 0.0);
  for (const auto& e : m_.entries) {
    rows[e.row] += std::abs(e.value);
    cols[e.col] += std::abs(e.value);
  }
  const double m_bound = std::sqrt(*std::max_element(rows.begin(), rows.end()) *
                                   *std::max_element(cols.begin(), cols.end()));
  norm_bound_ = 2.0 * m_bound + jump_bound;
}

CMatrix OperatorFormGenerator::apply(const CMatrix& rho) const {
  const std::size_t d = dim_;
  require_state_shape(rho, d, "OperatorFormGenerator::apply");
  CMatrix out(d, d);

  if (m_.dense) {
    out -= *m_.dense * rho;
    out -= rho * adjoint(*m_.dense);
  } else {
    // −Mρ
    for (const auto& e : m_.entries) {
      const cplx* src = rho.data() + e.col * d;
      cplx* dst = out.data() + e.row * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] -= e.value * src[c];
    }
    // −ρM†: out[r, i] −= ρ[r, j] conj(M[i, j])
    for (std::size_t r = 0; r < d; ++r) {
      const cplx* src = rho.data() + r * d;
      cplx* dst = out.data() + r * d;
      for (const auto& e : m_.entries) dst[e.row] -= src[e.col] * std::conj(e.value);
    }
  }

  for (const auto& op : jumps_) {
    if (op.dense) {
      out += *op.dense * rho * adjoint(*op.dense);
      continue;
    }
    // (LρL†)[a, c] = Σ L[a, b] ρ[b, e] conj(L[c, e])
    for (const auto& x : op.entries)
      for (const auto& y : op.entries) out(x.row, y.row) += x.value * rho(x.col, y.col) * std::conj(y.value);
  }
  return out;
}

CMatrix OperatorFormGenerator::step(const CMatrix& rho, double dt) const {
  const double theta = dt * norm_bound_;
  const double scale = rho.frobenius_norm();
  CMatrix acc = rho;
  CMatrix term = rho;
  for (std::size_t m = 1; m <= kMaxTaylorTerms; ++m) {
    term = apply(term);
    term *= dt / static_cast<double>(m);
    acc += term;
    // ‖term_{m+j}‖ ≤ ‖term_m‖ r^j with r = θ/(m+1), so the tail is at most ‖term_m‖ r/(1−r)
    const double r = theta / static_cast<double>(m + 1);
    if (r < 0.5 && term.frobenius_norm() * r / (1.0 - r) <= kTaylorTolerance * scale) return acc;
  }
  throw NumericalError("OperatorFormGenerator: Taylor series did not converge");
}

CMatrix OperatorFormGenerator::propagate(const CMatrix& rho0, double t) const {
  require_forward_time(t, "OperatorFormGenerator::propagate");
  require_state_shape(rho0, dim_, "OperatorFormGenerator::propagate");
  if (t == 0.0 || norm_bound_ == 0.0 || rho0.frobenius_norm() == 0.0) return rho0;

  const auto steps = static_cast<std::size_t>(std::ceil(t * norm_bound_ / kMaxStepNorm));
  const double dt = t / static_cast<double>(std::max<std::size_t>(steps, 1));
  CMatrix rho = rho0;
  for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) rho = step(rho, dt);
  if (!rho.all_finite()) throw NumericalError("OperatorFormGenerator: non-finite state");
  return rho;
}

Trajectory OperatorFormGenerator::trajectory(const CMatrix& rho0, std::span<const double> times,
                                             const Tolerances& tol) const {
  require_state_shape(rho0, dim_, "OperatorFormGenerator::trajectory");
  return run_trajectory(rho0, times, tol, [&](const CMatrix& rho, double dt) { return propagate(rho, dt); });
}

}  // namespace qsg
