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

#include "qsg/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qsg {

std::string_view to_string(DropoutVariant v) {
  return v == DropoutVariant::hopping ? "hopping" : "upwind";
}

DropoutVariant parse_dropout_variant(std::string_view s) {
  if (s == "hopping") return DropoutVariant::hopping;
  if (s == "upwind") return DropoutVariant::upwind;
  throw std::invalid_argument("unknown dropout variant '" + std::string(s) + "'");
}

SparseForm dropout_operator_form(const DropoutModel& m) {
  if (m.sites < 2) throw ValidationError("build_dropout: need at least 2 lattice sites");
  if (!(m.spacing > 0.0) || !std::isfinite(m.spacing)) throw ValidationError("build_dropout: spacing must be positive");

  const std::size_t n = m.sites;
  const std::size_t sink = sink_index(n);
  const double h = m.spacing;
  const double amp = 1.0 / std::sqrt(h);

  std::vector<SparseOperator> jumps;
  SparseOperator mover;
  if (m.variant == DropoutVariant::hopping) {
    for (std::size_t j = 1; j < n; ++j) jumps.push_back({{j - 1, j, amp}});
    for (std::size_t j = 0; j < n; ++j) mover.push_back({j, j, 0.5 / h});
  } else {
    // M = −∂_h
    for (std::size_t j = 0; j < n; ++j) {
      mover.push_back({j, j, 1.0 / h});
      if (j + 1 < n) mover.push_back({j, j + 1, -1.0 / h});
    }
  }
  jumps.push_back({{sink, 0, amp}});
  return {n + 1, std::move(mover), std::move(jumps)};
}

SparseForm sticking_operator_form(const StickingModel& m) {
  if (m.sites < 3) throw ValidationError("build_sticking: need at least 3 lattice sites");
  if (!(m.spacing > 0.0) || !std::isfinite(m.spacing)) throw ValidationError("build_sticking: spacing must be positive");
  if (m.w.imag() < 0.0) throw ValidationError("build_sticking: Im(w) < 0 would violate accretivity");

  const std::size_t n = m.sites;
  const double h = m.spacing;
  const double inv_h2 = 1.0 / (h * h);
  const cplx i(0.0, 1.0);

  // M = iH + ½L†L
  SparseOperator mover;
  for (std::size_t j = 0; j < n; ++j) {
    // ghost point ψ_{−1} = (1 − h Re w) ψ_0 folded into the first row
    const double diag = j == 0 ? (1.0 + h * m.w.real()) * inv_h2 : 2.0 * inv_h2;
    mover.push_back({j, j, i * diag});
    if (j + 1 < n) {
      mover.push_back({j, j + 1, -i * inv_h2});
      mover.push_back({j + 1, j, -i * inv_h2});
    }
  }

  std::vector<SparseOperator> jumps;
  if (m.w.imag() > 0.0) {
    const double amp = std::sqrt(2.0 * m.w.imag() / h);
    jumps.push_back({{sink_index(n), 0, amp}});
    mover.push_back({0, 0, 0.5 * amp * amp});
  }
  return {n + 1, std::move(mover), std::move(jumps)};
}

StandardForm build_dropout(const DropoutModel& m) { return dropout_operator_form(m).to_dense(); }

StandardForm build_sticking(const StickingModel& m) { return sticking_operator_form(m).to_dense(); }

namespace {

double packet_envelope(double x, double x0, double sigma) {
  const double u = (x - x0) / sigma;
  return std::exp(-0.25 * u * u);
}

}  // namespace

CVector gaussian_packet(std::size_t sites, double spacing, double x0, double sigma, double k) {
  if (sites == 0 || !(spacing > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: bad parameters");
  CVector psi(sites + 1);
  for (std::size_t j = 0; j < sites; ++j) {
    const double x = static_cast<double>(j) * spacing;
    psi[j] = packet_envelope(x, x0, sigma) * std::polar(1.0, k * x);
  }
  const double nrm = norm(psi);
  if (nrm == 0.0) throw std::invalid_argument("gaussian_packet: packet vanishes on the grid");
  for (auto& x : psi) x /= nrm;
  return psi;
}

CVector gaussian_samples(std::size_t sites, double spacing, double x0, double sigma, double k) {
  if (sites == 0 || !(spacing > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("gaussian_samples: bad parameters");
  // ∫ exp(−(x−x0)²/(2σ²)) dx = σ sqrt(2π)
  const double amp = 1.0 / std::sqrt(sigma * std::sqrt(2.0 * std::numbers::pi));
  CVector psi(sites);
  for (std::size_t j = 0; j < sites; ++j) {
    const double x = static_cast<double>(j) * spacing;
    psi[j] = amp * packet_envelope(x, x0, sigma) * std::polar(1.0, k * x);
  }
  return psi;
}

double dropout_sink_oracle(std::span<const cplx> samples, double spacing, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("dropout_sink_oracle: t must be non-negative");
  if (!(spacing > 0.0)) throw std::invalid_argument("dropout_sink_oracle: spacing must be positive");
  const std::size_t n = samples.size();
  // density on nodes x_0..x_N, with the truncation value 0 at x_N
  auto density = [&](std::size_t j) { return j < n ? std::norm(samples[j]) : 0.0; };

  const double upper = std::min(t, static_cast<double>(n) * spacing);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = static_cast<double>(j) * spacing;
    if (a >= upper) break;
    const double b = std::min(a + spacing, upper);
    const double fa = density(j);
    const double fb_node = density(j + 1);
    const double frac = (b - a) / spacing;
    const double fb = fa + frac * (fb_node - fa);
    acc += 0.5 * (b - a) * (fa + fb);
  }
  return acc;
}

double sink_population(const CMatrix& rho) {
  const std::size_t s = rho.rows() - 1;
  return rho(s, s).real();
}

}  // namespace qsg
