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

#include "qsg/random.hpp"

namespace qsg {

CVector gaussian_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CVector v(dim);
  for (auto& x : v) x = {normal(rng), normal(rng)};
  return v;
}

CVector random_unit_vector(std::size_t dim, Rng& rng) {
  CVector v = gaussian_vector(dim, rng);
  const double n = norm(v);
  for (auto& x : v) x /= n;
  return v;
}

CVector random_orthogonal_unit_vector(std::span<const cplx> phi, Rng& rng) {
  if (phi.size() < 2) throw DimensionError("random_orthogonal_unit_vector: dimension must be at least 2");
  CVector v = gaussian_vector(phi.size(), rng);
  // two Gram-Schmidt passes keep ⟨φ|v⟩ at roundoff level
  for (int pass = 0; pass < 2; ++pass) {
    const cplx overlap = inner(phi, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= overlap * phi[i];
  }
  const double n = norm(v);
  for (auto& x : v) x /= n;
  return v;
}

CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  return {rows, cols, gaussian_vector(rows * cols, rng)};
}

}  // namespace qsg
