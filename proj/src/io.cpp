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

#include "qsg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace qsg {

namespace {

const json& member(const json& j, const char* key, const char* where) {
  if (!j.is_object()) throw SchemaError(std::string(where) + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string(where) + ": missing \"" + key + "\"");
  return *it;
}

std::size_t positive_size(const json& j, const char* key, const char* where) {
  const json& v = member(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw SchemaError(std::string(where) + ": \"" + key + "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

double finite_number(const json& v, const char* where) {
  if (!v.is_number()) throw SchemaError(std::string(where) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(std::string(where) + ": non-finite number");
  return x;
}

double parse_double(std::string_view text, const char* what) {
  double x = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last) {
    throw SchemaError(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return x;
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json entries = json::array();
  for (const cplx& z : m.entries()) entries.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

CMatrix matrix_from_json(const json& j) {
  const std::size_t rows = positive_size(j, "rows", "matrix");
  const std::size_t cols = positive_size(j, "cols", "matrix");
  const json& entries = member(j, "entries", "matrix");
  if (!entries.is_array() || entries.size() != rows * cols) {
    throw SchemaError("matrix: \"entries\" must be an array of rows*cols pairs");
  }
  CVector values;
  values.reserve(rows * cols);
  for (const json& e : entries) {
    if (!e.is_array() || e.size() != 2) throw SchemaError("matrix: each entry must be a [re, im] pair");
    values.emplace_back(finite_number(e[0], "matrix entry"), finite_number(e[1], "matrix entry"));
  }
  return {rows, cols, std::move(values)};
}

json standard_form_to_json(const StandardForm& sf, const std::optional<Tolerances>& tol) {
  json kraus = json::array();
  for (const auto& k : sf.kraus()) kraus.push_back(matrix_to_json(k));
  json out = {{"dim", sf.dim()}, {"M", matrix_to_json(sf.m())}, {"kraus", std::move(kraus)}};
  out["chi_index"] = sf.chi_index() ? json(*sf.chi_index()) : json(nullptr);
  if (tol) out["tolerances"] = {{"eq_tol", tol->eq_tol}, {"psd_tol", tol->psd_tol}, {"pivot_tol", tol->pivot_tol}};
  return out;
}

StandardFormDocument standard_form_from_json(const json& j) {
  const std::size_t dim = positive_size(j, "dim", "standard form");
  CMatrix m = matrix_from_json(member(j, "M", "standard form"));
  if (m.rows() != dim || m.cols() != dim) throw SchemaError("standard form: M is not dim x dim");

  const json& kj = member(j, "kraus", "standard form");
  if (!kj.is_array()) throw SchemaError("standard form: \"kraus\" must be an array");
  std::vector<CMatrix> kraus;
  for (const json& e : kj) {
    CMatrix k = matrix_from_json(e);
    if (k.rows() != dim || k.cols() != dim) throw SchemaError("standard form: Kraus operator is not dim x dim");
    kraus.push_back(std::move(k));
  }

  std::optional<std::size_t> chi;
  if (auto it = j.find("chi_index"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 0 || it->get<std::size_t>() >= dim) {
      throw SchemaError("standard form: \"chi_index\" must be null or an index below dim");
    }
    chi = it->get<std::size_t>();
  }

  std::optional<Tolerances> tol;
  if (auto it = j.find("tolerances"); it != j.end()) {
    Tolerances t;
    if (!it->is_object()) throw SchemaError("standard form: \"tolerances\" must be an object");
    if (it->contains("eq_tol")) t.eq_tol = finite_number(it->at("eq_tol"), "eq_tol");
    if (it->contains("psd_tol")) t.psd_tol = finite_number(it->at("psd_tol"), "psd_tol");
    if (it->contains("pivot_tol")) t.pivot_tol = finite_number(it->at("pivot_tol"), "pivot_tol");
    try {
      t.validate();
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("standard form: ") + e.what());
    }
    tol = t;
  }
  return {StandardForm(std::move(m), std::move(kraus), chi), tol};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

SuperOperator superoperator_from_json(const json& j) {
  CMatrix mat = matrix_from_json(j);
  if (mat.rows() != mat.cols()) throw SchemaError("superoperator: matrix is not square");
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(mat.rows()))));
  if (d * d != mat.rows()) throw SchemaError("superoperator: size is not a perfect square");
  return {d, std::move(mat)};
}

std::vector<double> parse_time_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw SchemaError("times: expected t0:t1:n, got '" + std::string(text) + "'");
  }
  const double t0 = parse_double(text.substr(0, c1), "times");
  const double t1 = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "times");
  const std::string_view ns = text.substr(c2 + 1);
  long long n = 0;
  auto [ptr, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
  if (ec != std::errc() || ptr != ns.data() + ns.size()) throw SchemaError("times: n must be an integer");

  if (!std::isfinite(t0) || !std::isfinite(t1)) throw ValidationError("times: endpoints must be finite");
  if (t0 < 0.0 || t1 < 0.0) throw ValidationError("times: negative time range; only forward evolution is defined");
  if (n < 2) throw ValidationError("times: need n >= 2");
  if (!(t1 > t0)) throw ValidationError("times: need t1 > t0");

  std::vector<double> times(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  times.back() = t1;
  return times;
}

cplx parse_complex(std::string_view text) {
  if (text.empty()) throw SchemaError("complex: empty value");
  if (text.back() != 'i') return {parse_double(text, "complex"), 0.0};

  const std::string_view body = text.substr(0, text.size() - 1);
  // split at the last sign that is not a leading sign or an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_part = [](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s, "complex");
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body)};
  return {parse_double(body.substr(0, split), "complex"), imag_part(body.substr(split))};
}

std::vector<std::string> trajectory_csv_header(std::size_t dim) {
  std::vector<std::string> cols = {"time", "trace_re", "min_eig", "trace_norm"};
  const std::string sep = dim > 10 ? "_" : "";
  for (const char* part : {"re", "im"}) {
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k)
        cols.push_back(std::string("rho_") + part + "_" + std::to_string(j) + sep + std::to_string(k));
  }
  return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.states.empty()) throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  const std::size_t d = traj.states.front().rows();
  const auto header = trajectory_csv_header(d);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';

  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const StepDiagnostics& diag = traj.diagnostics[n];
    out << traj.times[n] << ',' << diag.trace_re << ',' << diag.min_eig << ',' << diag.trace_norm;
    const auto entries = traj.states[n].entries();
    for (const cplx& z : entries) out << ',' << z.real();
    for (const cplx& z : entries) out << ',' << z.imag();
    out << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace qsg
