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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsg/evolve.hpp"
#include "qsg/stdform.hpp"

namespace qsg {

using json = nlohmann::json;

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document parsed but does not match the expected layout.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"rows": r, "cols": c, "entries": [[re, im], ...]} in row-major order.
// Doubles are written in shortest round-trip form, so reading back gives
// the identical bit patterns.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

struct StandardFormDocument {
  StandardForm form;
  std::optional<Tolerances> tolerances;
};

// {"dim", "M", "kraus": [...], "chi_index": int | null, "tolerances"?}
json standard_form_to_json(const StandardForm& sf, const std::optional<Tolerances>& tol = std::nullopt);
StandardFormDocument standard_form_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

// Superoperator file: a d²×d² MatrixJson.
SuperOperator superoperator_from_json(const json& j);

// "t0:t1:n" → n equally spaced times from t0 to t1 inclusive. Malformed
// text throws SchemaError; n < 2, t1 ≤ t0 or a negative time throws
// ValidationError.
std::vector<double> parse_time_grid(std::string_view text);

// "re+imi", "re-imi", "re", "imi".
cplx parse_complex(std::string_view text);

// Trajectory CSV. Header: time, trace_re, min_eig, trace_norm, then
// rho_re_jk for all (j, k) in row-major order, then rho_im_jk. For d > 10
// the indices are separated, rho_re_j_k, so names stay unambiguous.
std::vector<std::string> trajectory_csv_header(std::size_t dim);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace qsg
