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

#include "qsg/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "qsg/decompose.hpp"
#include "qsg/evolve.hpp"
#include "qsg/io.hpp"
#include "qsg/models.hpp"

namespace qsg {

namespace {

constexpr std::size_t kPointwiseTrials = 1000;

Tolerances resolve_tolerances(const CommonOptions& opts, const std::optional<Tolerances>& from_file = std::nullopt) {
  Tolerances tol = from_file.value_or(Tolerances{});
  if (opts.eq_tol) tol.eq_tol = *opts.eq_tol;
  if (opts.psd_tol) tol.psd_tol = *opts.psd_tol;
  if (opts.pivot_tol) tol.pivot_tol = *opts.pivot_tol;
  try {
    tol.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return tol;
}

template <typename Body>
int guarded(Console io, Body&& body) {
  try {
    return body();
  } catch (const DecompositionError& e) {
    io.err << "error: " << e.what() << '\n' << "failed check: " << e.check() << '\n';
    if (e.witness()) io.err << "witness: " << matrix_to_json(*e.witness()).dump() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void report_line(std::ostream& out, const char* name, bool ok, const std::string& detail) {
  out << std::left << std::setw(28) << name << (ok ? "ok    " : "FAIL  ") << detail << '\n';
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

SparseForm build_model(const ModelOptions& m, std::size_t sites, double spacing) {
  if (m.model == "dropout") {
    DropoutVariant variant;
    try {
      variant = parse_dropout_variant(m.variant);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    return dropout_operator_form({sites, spacing, variant});
  }
  if (m.model == "sticking") return sticking_operator_form({sites, spacing, parse_complex(m.w)});
  throw ValidationError("unknown model '" + m.model + "' (expected dropout or sticking)");
}

CMatrix packet_state(const ModelOptions& m, std::size_t sites, double spacing) {
  if (!(m.sigma > 0.0) || !std::isfinite(m.x0) || !std::isfinite(m.k)) {
    throw ValidationError("packet parameters must be finite with sigma > 0");
  }
  const CVector psi = gaussian_packet(sites, spacing, m.x0, m.sigma, m.k);
  return outer(psi, psi);
}

}  // namespace

int cmd_build(const std::filesystem::path& in, const std::filesystem::path& out, const CommonOptions& opts,
              Console io) {
  return guarded(io, [&] {
    const StandardFormDocument doc = standard_form_from_json(read_json_file(in));
    const Tolerances tol = resolve_tolerances(opts, doc.tolerances);
    const double residual = verify_form_equality(doc.form);
    const double allowed = tol.eq_tol * form_equality_scale(doc.form);
    if (residual > allowed) {
      io.err << "error: form equality violated\n"
             << "form_equality_residual " << std::setprecision(17) << residual << " (allowed " << allowed << ")\n";
      return kExitValidation;
    }
    const SuperOperator gen = build_generator(doc.form, tol);
    write_json_file(out, matrix_to_json(gen.matrix()));
    io.out << "dim " << gen.dim() << "\nform_equality_residual " << residual << '\n';
    return kExitOk;
  });
}

int cmd_decompose(const std::filesystem::path& in, const std::filesystem::path& out, std::size_t chi,
                  const CommonOptions& opts, Console io) {
  return guarded(io, [&] {
    const SuperOperator gen = superoperator_from_json(read_json_file(in));
    const Tolerances tol = resolve_tolerances(opts);
    if (chi >= gen.dim()) throw ValidationError("--chi " + std::to_string(chi) + " is out of range for dimension " +
                                                std::to_string(gen.dim()));
    const StandardForm sf = decompose_generator(gen, chi, tol);
    const double round_trip = relative_difference(build_generator(sf, tol).matrix(), gen.matrix());
    write_json_file(out, standard_form_to_json(sf, tol));
    io.out << "dim " << sf.dim() << "\nchi_index " << chi << "\nkraus_count " << sf.kraus().size()
           << "\nround_trip_residual " << round_trip << "\nform_equality_residual " << verify_form_equality(sf)
           << '\n';
    return kExitOk;
  });
}

int cmd_verify(const std::filesystem::path& in, const CommonOptions& opts, Console io) {
  return guarded(io, [&] {
    const SuperOperator gen = superoperator_from_json(read_json_file(in));
    const Tolerances tol = resolve_tolerances(opts);
    bool all_ok = true;

    const TraceReport trace = check_trace_annihilation(gen, tol);
    report_line(io.out, "trace_annihilation", trace.ok, "max |Tr L(E_kl)| = " + fmt(trace.max_residual));
    all_ok = all_ok && trace.ok;

    const double herm = hermiticity_preservation_residual(gen);
    const bool herm_ok = herm <= tol.eq_tol;
    report_line(io.out, "hermiticity_preservation", herm_ok, "Choi asymmetry = " + fmt(herm));
    all_ok = all_ok && herm_ok;

    const PositivityReport ccp = is_conditionally_cp(gen, tol);
    report_line(io.out, "conditional_cp", ccp.ok, "min compressed Choi eigenvalue = " + fmt(ccp.min_eigenvalue));
    all_ok = all_ok && ccp.ok;

    const Lemma1Report lemma = check_lemma1_pointwise(gen, kPointwiseTrials, opts.seed, tol);
    report_line(io.out, "pointwise_positivity", lemma.ok(),
                std::to_string(lemma.trials) + " samples, max <phi|L(|phi><phi|)|phi> = " +
                    fmt(lemma.max_diagonal) + ", min <psi|L(|phi><phi|)|psi> = " + fmt(lemma.min_off_diagonal) +
                    ", violations " + std::to_string(lemma.diagonal_violations + lemma.off_diagonal_violations));
    all_ok = all_ok && lemma.ok();

    if (!all_ok) {
      io.err << "verification failed:";
      if (!trace.ok) io.err << " trace_annihilation";
      if (!herm_ok) io.err << " hermiticity_preservation";
      if (!ccp.ok) io.err << " conditional_cp";
      if (!lemma.ok()) io.err << " pointwise_positivity";
      io.err << '\n';
      return kExitValidation;
    }
    return kExitOk;
  });
}

int cmd_evolve(const std::filesystem::path& in, const std::filesystem::path& rho0_path, const std::string& times,
               const std::filesystem::path& out, const CommonOptions& opts, Console io) {
  return guarded(io, [&] {
    const json doc = read_json_file(in);
    const CMatrix rho0 = matrix_from_json(read_json_file(rho0_path));
    const std::vector<double> grid = parse_time_grid(times);

    Trajectory traj;
    if (doc.is_object() && doc.contains("M")) {
      const StandardFormDocument sf = standard_form_from_json(doc);
      const Tolerances tol = resolve_tolerances(opts, sf.tolerances);
      traj = OperatorFormGenerator(sf.form).trajectory(rho0, grid, tol);
    } else {
      const SuperOperator gen = superoperator_from_json(doc);
      traj = trajectory(gen, rho0, grid, resolve_tolerances(opts));
    }
    for (const auto& w : traj.warnings) io.err << "warning: " << w << '\n';

    std::ofstream csv = open_output(out);
    write_trajectory_csv(csv, traj);
    if (!csv) throw IoError("write to '" + out.string() + "' failed");
    io.out << "rows " << traj.times.size() << '\n';
    return kExitOk;
  });
}

int cmd_model(const ModelOptions& m, const CommonOptions& opts, Console io) {
  return guarded(io, [&] {
    const Tolerances tol = resolve_tolerances(opts);
    const std::vector<double> grid = parse_time_grid(m.times);
    const SparseForm sf = build_model(m, m.sites, m.spacing);

    const double residual = verify_form_equality(sf);
    io.out << "model " << m.model << (m.model == "dropout" ? " (" + m.variant + ")" : std::string()) << "\ndim "
           << sf.dim() << "\nkraus_count " << sf.kraus().size() << "\nform_equality_residual " << residual
           << "\naccretivity_margin " << accretivity_margin(sf) << '\n';
    if (m.out) write_json_file(*m.out, standard_form_to_json(sf.to_dense(), tol));

    if (m.evolve_csv) {
      const Trajectory traj = OperatorFormGenerator(sf).trajectory(packet_state(m, m.sites, m.spacing), grid, tol);
      std::ofstream csv = open_output(*m.evolve_csv);
      write_trajectory_csv(csv, traj);
      if (!csv) throw IoError("write to '" + m.evolve_csv->string() + "' failed");
      io.out << "trajectory_rows " << traj.times.size() << "\nfinal_sink_population "
             << sink_population(traj.states.back()) << '\n';
    }

    if (m.refine > 0) {
      const double t = grid.back();
      io.out << "refinement at t = " << t << '\n'
             << "level,h,N,sink_population,trace_deficit,deficit_ratio\n";
      double previous_deficit = 0.0;
      io.out << std::setprecision(10);
      for (std::size_t level = 0; level <= m.refine; ++level) {
        const auto factor = static_cast<std::size_t>(1) << level;
        const std::size_t sites = m.sites * factor;
        const double spacing = m.spacing / static_cast<double>(factor);
        const SparseForm level_form = level == 0 ? sf : build_model(m, sites, spacing);
        const CMatrix rho = OperatorFormGenerator(level_form).propagate(packet_state(m, sites, spacing), t);
        const double deficit = 1.0 - rho.trace().real();
        io.out << level << ',' << spacing << ',' << sites << ',' << sink_population(rho) << ',' << deficit << ',';
        if (level > 0) io.out << previous_deficit / deficit;
        io.out << '\n';
        previous_deficit = deficit;
      }
    }
    return kExitOk;
  });
}

}  // namespace qsg
