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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qsg/linalg.hpp"

namespace qsg {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

struct CommonOptions {
  std::optional<double> eq_tol;
  std::optional<double> psd_tol;
  std::optional<double> pivot_tol;
  std::uint64_t seed = 0;
};

// Streams for the human-readable report and for diagnostics.
struct Console {
  std::ostream& out;
  std::ostream& err;
};

// Standard form JSON → d²×d² superoperator JSON.
int cmd_build(const std::filesystem::path& in, const std::filesystem::path& out, const CommonOptions& opts,
              Console io);

// Superoperator JSON → standard form JSON with χ = e_chi.
int cmd_decompose(const std::filesystem::path& in, const std::filesystem::path& out, std::size_t chi,
                  const CommonOptions& opts, Console io);

// Trace annihilation, Hermiticity preservation, conditional complete
// positivity and pointwise positivity samples on a superoperator file.
int cmd_verify(const std::filesystem::path& in, const CommonOptions& opts, Console io);

// Trajectory CSV. The generator file may be a superoperator or a standard
// form; standard forms are propagated in operator form, so large lattice
// models never need a d²×d² matrix.
int cmd_evolve(const std::filesystem::path& in, const std::filesystem::path& rho0, const std::string& times,
               const std::filesystem::path& out, const CommonOptions& opts, Console io);

struct ModelOptions {
  std::string model;              // dropout | sticking
  std::string variant = "hopping";
  std::size_t sites = 100;
  double spacing = 0.1;
  std::string w = "0+1i";
  // initial packet
  double x0 = 5.0;
  double sigma = 1.0;
  double k = 0.0;
  std::string times = "0:3:31";
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> evolve_csv;
  // number of grid halvings for the convergence table (0 = none)
  std::size_t refine = 0;
};

int cmd_model(const ModelOptions& model, const CommonOptions& opts, Console io);

}  // namespace qsg
