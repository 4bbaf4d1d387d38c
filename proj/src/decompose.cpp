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

#include "qsg/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsg {

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

CMatrix extract_M(const SuperOperator& gen, std::span<const cplx> chi, const Tolerances& tol) {
  const std::size_t d = gen.dim();
  if (chi.size() != d) throw DimensionError("extract_M: reference vector has the wrong length");
  if (std::abs(norm(chi) - 1.0) > tol.eq_tol) {
    throw std::invalid_argument("extract_M: reference vector must have unit norm");
  }

  const CMatrix at_chi = gen.apply(outer(chi, chi));
  const cplx shift = 0.5 * inner(chi, matvec(at_chi, chi));

  CMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const CVector ej = basis_vector(d, j);
    const CVector col = matvec(gen.apply(outer(ej, chi)), chi);
    for (std::size_t i = 0; i < d; ++i) m(i, j) = -col[i];
    m(j, j) += shift;
  }
  return m;
}

SuperOperator expander(const SuperOperator& gen, const CMatrix& m) {
  if (m.rows() != gen.dim() || m.cols() != gen.dim()) throw DimensionError("expander: M has the wrong shape");
  return gen + mover_superoperator(m);
}

//-------------------------------------------------------------------------
// Ordering and Gram data
//-------------------------------------------------------------------------

PairOrdering::PairOrdering(std::size_t dim, std::size_t shift)
    : dim_(dim), shift_(shift), rank_(dim * dim), pairs_(dim * dim) {
  if (dim == 0) throw DimensionError("PairOrdering: dimension must be positive");
  if (shift >= dim) throw DimensionError("PairOrdering: shift out of range");

  std::vector<bool> seen(dim * dim, false);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t p = (i + dim - shift) % dim + 1;
      const std::size_t q = (k + dim - shift) % dim + 1;
      const std::size_t n = std::max(p, q);
      const std::size_t alpha = n * n - n + p - q;
      if (alpha >= dim * dim || seen[alpha]) {
        throw std::logic_error("PairOrdering: rank function is not a bijection");
      }
      seen[alpha] = true;
      rank_[i * dim + k] = alpha;
      pairs_[alpha] = {i, k};
    }
  }
}

GramMatrix::GramMatrix(const SuperOperator& q, const PairOrdering& ord) : dim_(q.dim()), mat_(q.dim() * q.dim(), q.dim() * q.dim()) {
  if (ord.dim() != dim_) throw DimensionError("GramMatrix: ordering dimension differs from the map");
  const std::size_t d = dim_;
  // ⟨e_i|Q(E_{k,l})|e_j⟩ = S[i + j*d, k + l*d]
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l) mat_(ord.rank(i, k), ord.rank(j, l)) = q.matrix()(i + j * d, k + l * d);
}

CMatrix KrausSet::apply(const CMatrix& rho) const {
  CMatrix out(dim, dim);
  for (const auto& k : operators) out += k * rho * adjoint(k);
  return out;
}

SuperOperator KrausSet::to_superoperator() const {
  CMatrix mat(dim * dim, dim * dim);
  for (const auto& k : operators) mat += kron(conj(k), k);
  return {dim, std::move(mat)};
}

CMatrix normalize_phase(CMatrix k) {
  std::size_t best = 0;
  double best_abs = -1.0;
  const auto entries = k.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (std::abs(entries[i]) > best_abs) {
      best_abs = std::abs(entries[i]);
      best = i;
    }
  }
  if (best_abs > 0.0) k *= std::conj(entries[best]) / best_abs;
  return k;
}

namespace {

double gram_pivot_threshold(const CMatrix& g, const Tolerances& tol) {
  return tol.pivot_tol * std::max(0.0, g.trace().real());
}

void require_psd(const CMatrix& g, const Tolerances& tol, const char* what) {
  const HermitianEigen eig = eig_hermitian(g);
  if (eig.values.front() < -tol.psd_tol) {
    throw DecompositionError("psd", eig.values.front(), std::nullopt,
                             std::string(what) + ": matrix is not positive semidefinite, most negative eigenvalue " +
                                 format_value(eig.values.front()));
  }
}

}  // namespace

PairOrdering choose_ordering(const SuperOperator& q, const Tolerances& tol) {
  const std::size_t d = q.dim();
  double trace = 0.0;
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t i = 0; i < d; ++i) trace += q.matrix()(i + i * d, s + s * d).real();
  const double threshold = tol.pivot_tol * std::max(0.0, trace);
  for (std::size_t s = 0; s < d; ++s) {
    if (q.matrix()(s + s * d, s + s * d).real() > threshold) return PairOrdering(d, s);
  }
  return PairOrdering(d, 0);
}

std::pair<CholeskyFactor, KrausSet> cholesky_kraus(const GramMatrix& g, const PairOrdering& ord,
                                                   const Tolerances& tol) {
  if (ord.dim() != g.dim()) throw DimensionError("cholesky_kraus: ordering dimension differs from the Gram matrix");
  const CMatrix& gm = g.matrix();
  require_psd(gm, tol, "cholesky_kraus");

  const std::size_t n = gm.rows();
  const double threshold = gram_pivot_threshold(gm, tol);
  const double negative_slack = std::max(threshold, tol.psd_tol);

  CMatrix gamma(n, n);
  std::vector<bool> rejected(n, false);
  std::vector<std::size_t> rejected_list;

  for (std::size_t alpha = 0; alpha < n; ++alpha) {
    double off_norm = 0.0;
    for (std::size_t beta = 0; beta < alpha; ++beta) {
      if (rejected[beta]) continue;  // γ_{α,β} stays 0
      cplx acc = gm(beta, alpha);
      for (std::size_t bp = 0; bp < beta; ++bp) acc -= std::conj(gamma(beta, bp)) * gamma(alpha, bp);
      const cplx value = acc / gamma(beta, beta).real();
      gamma(alpha, beta) = value;
      off_norm += std::norm(value);
    }
    const double pivot_sq = gm(alpha, alpha).real() - off_norm;
    if (pivot_sq < -negative_slack) {
      throw DecompositionError("pivot", pivot_sq, std::nullopt,
                               "cholesky_kraus: negative pivot " + format_value(pivot_sq) + " at alpha = " +
                                   std::to_string(alpha));
    }
    if (pivot_sq <= threshold) {
      rejected[alpha] = true;
      rejected_list.push_back(alpha);
    } else {
      gamma(alpha, alpha) = std::sqrt(pivot_sq);
    }
  }

  const std::size_t d = g.dim();
  KrausSet kraus{d, {}};
  for (std::size_t alpha = 0; alpha < n; ++alpha) {
    if (rejected[alpha]) continue;
    CMatrix k(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t kk = 0; kk < d; ++kk) k(i, kk) = std::conj(gamma(ord.rank(i, kk), alpha));
    kraus.operators.push_back(normalize_phase(std::move(k)));
  }
  return {CholeskyFactor{std::move(gamma), std::move(rejected_list)}, std::move(kraus)};
}

KrausSet spectral_kraus_oracle(const ChoiMatrix& c, const Tolerances& tol) {
  const std::size_t d = c.dim();
  const HermitianEigen eig = eig_hermitian(c.matrix());
  if (eig.values.front() < -tol.psd_tol) {
    throw DecompositionError("psd", eig.values.front(), std::nullopt,
                             "spectral_kraus_oracle: Choi matrix is not positive semidefinite, most negative "
                             "eigenvalue " + format_value(eig.values.front()));
  }
  const double threshold = tol.pivot_tol * std::max(0.0, c.matrix().trace().real());

  KrausSet out{d, {}};
  // largest eigenvalues first
  for (std::size_t idx = eig.values.size(); idx-- > 0;) {
    const double lambda = eig.values[idx];
    if (lambda <= threshold) break;
    CMatrix k(d, d);
    const double s = std::sqrt(lambda);
    for (std::size_t kk = 0; kk < d; ++kk)
      for (std::size_t i = 0; i < d; ++i) k(i, kk) = s * eig.vectors(kk * d + i, idx);
    out.operators.push_back(normalize_phase(std::move(k)));
  }
  return out;
}

//-------------------------------------------------------------------------
// Expander inequalities
//-------------------------------------------------------------------------

namespace {

void record(InequalityReport& r, double lhs, double rhs, const Tolerances& tol) {
  const double slack = (lhs - rhs) / std::max(1.0, rhs);
  ++r.samples;
  r.max_slack = std::max(r.max_slack, slack);
  if (slack > tol.eq_tol) ++r.violations;
}

// δ with ‖δ‖ ≤ size and ‖Mδ‖ ≤ size
CVector graph_perturbation(const CMatrix& m, double size, Rng& rng) {
  CVector u = gaussian_vector(m.rows(), rng);
  const double scale = std::max(norm(u), norm(matvec(m, u)));
  if (scale == 0.0) return u;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double factor = size * unit(rng) / scale;
  for (auto& x : u) x *= factor;
  return u;
}

CVector add(std::span<const cplx> a, std::span<const cplx> b) {
  CVector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

}  // namespace

InequalityReport check_schwarz_bound(const SuperOperator& plus, std::size_t samples, std::uint64_t seed,
                                     const Tolerances& tol) {
  Rng rng(seed);
  InequalityReport report;
  for (std::size_t n = 0; n < samples; ++n) {
    const CVector phi = random_unit_vector(plus.dim(), rng);
    const CVector psi = random_unit_vector(plus.dim(), rng);
    const double lhs = trace_norm(plus.apply(outer(phi, psi)));
    const double rhs = std::sqrt(trace_norm(plus.apply(outer(phi, phi))) * trace_norm(plus.apply(outer(psi, psi))));
    record(report, lhs, rhs, tol);
  }
  return report;
}

GraphContinuityReport check_graph_continuity(const SuperOperator& plus, const CMatrix& m, std::size_t samples,
                                             std::uint64_t seed, const Tolerances& tol) {
  if (m.rows() != plus.dim() || m.cols() != plus.dim()) throw DimensionError("check_graph_continuity: M has the wrong shape");
  const SuperOperator mover = mover_superoperator(m);
  Rng rng(seed);
  std::uniform_real_distribution<double> log_eps(std::log(1e-6), 0.0);
  GraphContinuityReport report;
  for (std::size_t n = 0; n < samples; ++n) {
    const CVector phi = random_unit_vector(plus.dim(), rng);
    const CVector psi = random_unit_vector(plus.dim(), rng);
    const double eps = std::exp(log_eps(rng));
    const CVector e = add(phi, graph_perturbation(m, eps, rng));
    const CVector f = add(psi, graph_perturbation(m, eps, rng));

    const double rhs = eps * (norm(phi) + norm(matvec(m, phi)) + norm(psi) + norm(matvec(m, psi)) + 2.0 * eps);
    const CMatrix near = outer(phi, psi);
    const CMatrix far = outer(e, f);
    record(report.mover, trace_norm(mover.apply(near) - mover.apply(far)), rhs, tol);
    record(report.expander, trace_norm(plus.apply(near) - plus.apply(far)), rhs, tol);
  }
  return report;
}

TraceDominationReport check_trace_domination(const SuperOperator& plus, const CMatrix& m, std::size_t samples,
                                             std::uint64_t seed, const Tolerances& tol) {
  if (m.rows() != plus.dim() || m.cols() != plus.dim()) throw DimensionError("check_trace_domination: M has the wrong shape");
  const std::size_t d = plus.dim();
  const SuperOperator mover = mover_superoperator(m);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> rank_dist(1, d);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  TraceDominationReport report;
  for (std::size_t n = 0; n < samples; ++n) {
    CMatrix rho(d, d);
    const std::size_t rank = rank_dist(rng);
    for (std::size_t r = 0; r < rank; ++r) {
      const CVector v = random_unit_vector(d, rng);
      rho += cplx(weight(rng)) * outer(v, v);
    }
    rho *= 1.0 / rho.trace().real();

    const CMatrix moved = mover.apply(rho);
    const double scale = std::max(1.0, trace_norm(moved));
    const double tr_plus = plus.apply(rho).trace().real() / scale;
    const double tr_mover = moved.trace().real() / scale;
    const double excess = tr_mover - trace_norm(moved) / scale;
    const double mismatch = std::abs(tr_plus - tr_mover);

    ++report.samples;
    report.max_trace_mismatch = std::max(report.max_trace_mismatch, mismatch);
    report.min_trace = std::min(report.min_trace, tr_plus);
    report.max_norm_excess = std::max(report.max_norm_excess, excess);
    if (mismatch > tol.eq_tol || tr_plus < -tol.eq_tol || excess > tol.eq_tol) ++report.violations;
  }
  return report;
}

//-------------------------------------------------------------------------
// Pipeline
//-------------------------------------------------------------------------

StandardForm decompose_generator(const SuperOperator& gen, std::span<const cplx> chi, const Tolerances& tol,
                                 std::optional<std::size_t> chi_index) {
  tol.validate();

  const PositivityReport ccp = is_conditionally_cp(gen, tol);
  if (!ccp.ok) {
    const bool herm = ccp.hermiticity_residual > tol.eq_tol;
    throw DecompositionError(
        "conditional_complete_positivity", herm ? ccp.hermiticity_residual : ccp.min_eigenvalue, ccp.witness,
        herm ? "generator is not Hermiticity preserving: Choi asymmetry " + format_value(ccp.hermiticity_residual)
             : "generator is not conditionally completely positive: compressed Choi eigenvalue " +
                   format_value(ccp.min_eigenvalue));
  }

  const TraceReport trace = check_trace_annihilation(gen, tol);
  if (!trace.ok) {
    throw DecompositionError("trace_annihilation", trace.max_residual, std::nullopt,
                             "generator does not annihilate the trace: max |Tr L(E_kl)| = " +
                                 format_value(trace.max_residual));
  }

  CMatrix m = extract_M(gen, chi, tol);
  const SuperOperator plus = expander(gen, m);

  const PositivityReport cp = is_completely_positive(plus, tol);
  if (!cp.ok) {
    throw DecompositionError("expander_complete_positivity", cp.min_eigenvalue, cp.witness,
                             "expander is not completely positive: Choi eigenvalue " +
                                 format_value(cp.min_eigenvalue));
  }

  const PairOrdering ord = choose_ordering(plus, tol);
  auto [factor, kraus] = cholesky_kraus(GramMatrix(plus, ord), ord, tol);

  StandardForm sf(std::move(m), std::move(kraus.operators), chi_index);

  const double residual = verify_form_equality(sf);
  if (residual > tol.eq_tol * form_equality_scale(sf)) {
    throw DecompositionError("form_equality", residual, std::nullopt,
                             "recovered form violates form equality: residual " + format_value(residual));
  }

  const double round_trip = relative_difference(build_generator(sf, tol).matrix(), gen.matrix());
  if (round_trip > tol.eq_tol) {
    throw DecompositionError("round_trip", round_trip, std::nullopt,
                             "rebuilt generator differs from the input: relative difference " +
                                 format_value(round_trip));
  }
  return sf;
}

StandardForm decompose_generator(const SuperOperator& gen, std::size_t chi_index, const Tolerances& tol) {
  if (chi_index >= gen.dim()) throw DimensionError("decompose_generator: chi index out of range");
  const CVector chi = basis_vector(gen.dim(), chi_index);
  return decompose_generator(gen, chi, tol, chi_index);
}

}  // namespace qsg
