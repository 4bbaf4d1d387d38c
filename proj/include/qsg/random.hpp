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

#include <random>

#include "qsg/linalg.hpp"

namespace qsg {

using Rng = std::mt19937_64;

// Complex vector with i.i.d. standard normal real and imaginary parts.
CVector gaussian_vector(std::size_t dim, Rng& rng);
// Uniformly distributed unit vector.
CVector random_unit_vector(std::size_t dim, Rng& rng);
// Random unit vector orthogonal to the unit vector phi (dim ≥ 2).
CVector random_orthogonal_unit_vector(std::span<const cplx> phi, Rng& rng);
// Matrix with i.i.d. standard complex normal entries.
CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace qsg
