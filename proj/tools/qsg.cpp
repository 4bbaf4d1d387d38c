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

// qsg: build, decompose, verify and evolve quantum dynamical semigroup
// generators given as JSON files.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsg/commands.hpp"

namespace {

void add_common(CLI::App* cmd, qsg::CommonOptions& opts) {
  cmd->add_option("--tol-eq", opts.eq_tol, "relative equality tolerance");
  cmd->add_option("--tol-psd", opts.psd_tol, "eigenvalue slack for positivity tests");
  cmd->add_option("--tol-pivot", opts.pivot_tol, "Cholesky pivot rejection threshold (relative to the Gram trace)");
  cmd->add_option("--seed", opts.seed, "seed for sampled checks")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum dynamical semigroup generators in generalized standard form"};
  app.require_subcommand(1);

  qsg::CommonOptions common;
  std::string in, out, rho0, times = "0:1:11";
  std::size_t chi = 0;
  qsg::ModelOptions model;
  std::string model_out, model_csv;

  auto* build = app.add_subcommand("build", "standard form JSON -> superoperator JSON");
  build->add_option("input", in, "standard form file")->required();
  build->add_option("-o,--out", out, "superoperator file")->required();
  add_common(build, common);

  auto* decompose = app.add_subcommand("decompose", "superoperator JSON -> standard form JSON");
  decompose->add_option("input", in, "superoperator file")->required();
  decompose->add_option("-o,--out", out, "standard form file")->required();
  decompose->add_option("--chi", chi, "basis index of the reference vector")->capture_default_str();
  add_common(decompose, common);

  auto* verify = app.add_subcommand("verify", "check the generator conditions on a superoperator");
  verify->add_option("input", in, "superoperator file")->required();
  add_common(verify, common);

  auto* evolve = app.add_subcommand("evolve", "trajectory CSV from a superoperator or standard form");
  evolve->add_option("input", in, "superoperator or standard form file")->required();
  evolve->add_option("--rho0", rho0, "initial state (matrix JSON)")->required();
  evolve->add_option("--times", times, "t0:t1:n")->capture_default_str();
  evolve->add_option("-o,--out", out, "CSV file")->required();
  add_common(evolve, common);

  auto* mdl = app.add_subcommand("model", "build a lattice model");
  // --h is the grid spacing here
  mdl->set_help_flag("--help", "Print this help message and exit");
  mdl->add_option("--model", model.model, "dropout | sticking")->required();
  mdl->add_option("--variant", model.variant, "dropout variant: hopping | upwind")->capture_default_str();
  mdl->add_option("--N", model.sites, "lattice sites")->capture_default_str();
  mdl->add_option("--h", model.spacing, "grid spacing")->capture_default_str();
  mdl->add_option("--w", model.w, "Robin parameter, e.g. 0+1i")->capture_default_str();
  mdl->add_option("--x0", model.x0, "packet center")->capture_default_str();
  mdl->add_option("--sigma", model.sigma, "packet width")->capture_default_str();
  mdl->add_option("--k", model.k, "packet wave number")->capture_default_str();
  mdl->add_option("--times", model.times, "t0:t1:n for --evolve; --refine uses t1")->capture_default_str();
  mdl->add_option("--refine", model.refine, "number of grid halvings for the convergence table");
  mdl->add_option("--evolve", model_csv, "write the packet trajectory to this CSV file");
  mdl->add_option("-o,--out", model_out, "standard form file");
  add_common(mdl, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qsg::kExitIo;
  }

  const qsg::Console io{std::cout, std::cerr};
  if (*build) return qsg::cmd_build(in, out, common, io);
  if (*decompose) return qsg::cmd_decompose(in, out, chi, common, io);
  if (*verify) return qsg::cmd_verify(in, common, io);
  if (*evolve) return qsg::cmd_evolve(in, rho0, times, out, common, io);
  if (!model_out.empty()) model.out = model_out;
  if (!model_csv.empty()) model.evolve_csv = model_csv;
  return qsg::cmd_model(model, common, io);
}
