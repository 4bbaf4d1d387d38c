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

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "qsg/commands.hpp"
#include "qsg/io.hpp"
#include "qsg/models.hpp"
#include "test_support.hpp"

using namespace qsg;
using namespace qsg::testing;
namespace fs = std::filesystem;

namespace {

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("qsg_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
Run capture(F&& f) {
  std::ostringstream out, err;
  const int code = f(Console{out, err});
  return {code, out.str(), err.str()};
}

bool bit_equal(const CMatrix& a, const CMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), a.entries().size() * sizeof(cplx)) == 0;
}

StandardForm amplitude_damping() { return StandardForm(CMatrix{{0.0, 0.0}, {0.0, 0.5}}, {sigma_minus()}); }

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
};

Csv read_csv(const fs::path& path) {
  std::ifstream in(path);
  Csv csv;
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) csv.header.push_back(cell);
  while (std::getline(in, line)) {
    std::stringstream rs(line);
    std::vector<double> row;
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::stod(cell));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(QSG_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("matrix JSON round trip is bit-exact") {
  Rng rng(50);
  CMatrix m = gaussian_matrix(3, 4, rng);
  m(0, 0) = cplx(1.0 / 3.0, -0.0);
  m(0, 1) = cplx(1e-300, std::numeric_limits<double>::denorm_min());
  m(0, 2) = cplx(std::numeric_limits<double>::max(), 0.1);
  const std::string text = matrix_to_json(m).dump();
  const CMatrix back = matrix_from_json(json::parse(text));
  CHECK(bit_equal(back, m));
  CHECK(std::signbit(back(0, 0).imag()));
}

TEST_CASE("matrix JSON schema errors") {
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":1,"cols":2,"entries":[[1,0]]})")), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"entries":[[1]]})")), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"entries":[["1","0"]]})")), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":0,"cols":1,"entries":[]})")), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"cols":1,"entries":[[0,0]]})")), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"([1,2])")), SchemaError);
  CHECK(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"entries":[[2,-3]]})"))(0, 0) == cplx(2.0, -3.0));
}

TEST_CASE("standard form JSON round trip") {
  Rng rng(51);
  const auto inst = random_gksl(3, 2, rng);
  SUBCASE("null chi index, no tolerances") {
    const json j = standard_form_to_json(inst.form);
    CHECK(j["chi_index"].is_null());
    CHECK_FALSE(j.contains("tolerances"));
    const StandardFormDocument doc = standard_form_from_json(json::parse(j.dump()));
    CHECK(bit_equal(doc.form.m(), inst.form.m()));
    REQUIRE(doc.form.kraus().size() == 2);
    CHECK(bit_equal(doc.form.kraus()[1], inst.form.kraus()[1]));
    CHECK_FALSE(doc.form.chi_index().has_value());
    CHECK_FALSE(doc.tolerances.has_value());
  }
  SUBCASE("chi index and tolerances") {
    const StandardForm sf(inst.form.m(), inst.form.kraus(), 2);
    const Tolerances tol{1e-9, 2e-9, 3e-13};
    const StandardFormDocument doc = standard_form_from_json(json::parse(standard_form_to_json(sf, tol).dump()));
    CHECK(doc.form.chi_index() == std::optional<std::size_t>{2});
    REQUIRE(doc.tolerances.has_value());
    CHECK(doc.tolerances->pivot_tol == 3e-13);
  }
  SUBCASE("schema violations") {
    json j = standard_form_to_json(inst.form);
    j["dim"] = 4;
    CHECK_THROWS_AS(standard_form_from_json(j), SchemaError);
    j = standard_form_to_json(inst.form);
    j["chi_index"] = 3;
    CHECK_THROWS_AS(standard_form_from_json(j), SchemaError);
    j = standard_form_to_json(inst.form);
    j["kraus"].push_back(matrix_to_json(CMatrix(2, 2)));
    CHECK_THROWS_AS(standard_form_from_json(j), SchemaError);
    j = standard_form_to_json(inst.form);
    j["tolerances"] = {{"eq_tol", -1.0}};
    CHECK_THROWS_AS(standard_form_from_json(j), SchemaError);
  }
}

TEST_CASE("flag parsers") {
  const auto times = parse_time_grid("0:3:31");
  REQUIRE(times.size() == 31);
  CHECK(times[10] == doctest::Approx(1.0));
  CHECK(times.back() == 3.0);
  CHECK_THROWS_AS(parse_time_grid("0:3"), SchemaError);
  CHECK_THROWS_AS(parse_time_grid("a:3:4"), SchemaError);
  CHECK_THROWS_AS(parse_time_grid("-1:3:4"), ValidationError);
  CHECK_THROWS_AS(parse_time_grid("0:3:1"), ValidationError);
  CHECK_THROWS_AS(parse_time_grid("2:1:5"), ValidationError);

  CHECK(parse_complex("0+1i") == cplx(0.0, 1.0));
  CHECK(parse_complex("0.5-2i") == cplx(0.5, -2.0));
  CHECK(parse_complex("-1e-3+2.5e+1i") == cplx(-1e-3, 25.0));
  CHECK(parse_complex("3") == cplx(3.0, 0.0));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK(parse_complex("2i") == cplx(0.0, 2.0));
  CHECK_THROWS_AS(parse_complex("1+xi"), SchemaError);
  CHECK_THROWS_AS(parse_complex(""), SchemaError);
}

TEST_CASE("trajectory CSV header") {
  const auto small = trajectory_csv_header(2);
  REQUIRE(small.size() == 4 + 8);
  CHECK(small[0] == "time");
  CHECK(small[3] == "trace_norm");
  CHECK(small[4] == "rho_re_00");
  CHECK(small[7] == "rho_re_11");
  CHECK(small[8] == "rho_im_00");
  const auto large = trajectory_csv_header(11);
  CHECK(large[4 + 11 * 10 + 3] == "rho_re_10_3");
}

TEST_CASE("build command") {
  Scratch tmp;
  SUBCASE("amplitude damping file acts as expected after a file round trip") {
    write_json_file(tmp / "ad.json", standard_form_to_json(amplitude_damping()));
    const Run r = capture([&](Console io) { return cmd_build(tmp / "ad.json", tmp / "ad_super.json", {}, io); });
    REQUIRE(r.code == kExitOk);
    const SuperOperator s = superoperator_from_json(read_json_file(tmp / "ad_super.json"));
    CHECK(s.matrix().rows() == 4);
    CHECK(relative_difference(unvec(matvec(s.matrix(), vec(unit(1, 1, 2))), 2), CMatrix{{1.0, 0.0}, {0.0, -1.0}}) <
          1e-15);
  }
  SUBCASE("empty form gives the zero matrix") {
    write_json_file(tmp / "zero.json", standard_form_to_json(StandardForm(CMatrix(2, 2), {})));
    REQUIRE(capture([&](Console io) { return cmd_build(tmp / "zero.json", tmp / "out.json", {}, io); }).code == 0);
    CHECK(matrix_from_json(read_json_file(tmp / "out.json")) == CMatrix(4, 4));
  }
  SUBCASE("form-equality violation exits 2 with the residual") {
    write_json_file(tmp / "bad.json", standard_form_to_json(StandardForm(CMatrix(2, 2), {sigma_minus()})));
    const Run r = capture([&](Console io) { return cmd_build(tmp / "bad.json", tmp / "out.json", {}, io); });
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("form_equality_residual 1") != std::string::npos);
  }
  SUBCASE("missing file exits 1") {
    CHECK(capture([&](Console io) { return cmd_build(tmp / "nope.json", tmp / "out.json", {}, io); }).code == kExitIo);
  }
  SUBCASE("malformed JSON exits 1") {
    std::ofstream(tmp / "junk.json") << "{not json";
    CHECK(capture([&](Console io) { return cmd_build(tmp / "junk.json", tmp / "out.json", {}, io); }).code == kExitIo);
  }
}

TEST_CASE("decompose command") {
  Scratch tmp;
  SUBCASE("amplitude damping") {
    write_json_file(tmp / "ad.json", matrix_to_json(build_generator(amplitude_damping()).matrix()));
    const Run r = capture([&](Console io) { return cmd_decompose(tmp / "ad.json", tmp / "sf.json", 0, {}, io); });
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("kraus_count 1") != std::string::npos);
    const StandardFormDocument doc = standard_form_from_json(read_json_file(tmp / "sf.json"));
    CHECK(doc.form.kraus().size() == 1);
    CHECK(relative_difference(doc.form.m(), CMatrix{{0.0, 0.0}, {0.0, 0.5}}) < 1e-14);
    CHECK(doc.form.chi_index() == std::optional<std::size_t>{0});
  }
  SUBCASE("zero matrix") {
    write_json_file(tmp / "z.json", matrix_to_json(CMatrix(9, 9)));
    const Run r = capture([&](Console io) { return cmd_decompose(tmp / "z.json", tmp / "sf.json", 1, {}, io); });
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("round_trip_residual 0") != std::string::npos);
    const StandardFormDocument doc = standard_form_from_json(read_json_file(tmp / "sf.json"));
    CHECK(doc.form.kraus().empty());
    CHECK(doc.form.m() == CMatrix(3, 3));
  }
  SUBCASE("transpose map exits 2 with the witness") {
    write_json_file(tmp / "t.json", matrix_to_json(SuperOperator::transpose_map(2).matrix()));
    const Run r = capture([&](Console io) { return cmd_decompose(tmp / "t.json", tmp / "sf.json", 0, {}, io); });
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("witness") != std::string::npos);
    CHECK(r.err.find("failed check") != std::string::npos);
  }
  SUBCASE("not a square superoperator exits 1") {
    write_json_file(tmp / "odd.json", matrix_to_json(CMatrix(3, 3)));
    CHECK(capture([&](Console io) { return cmd_decompose(tmp / "odd.json", tmp / "sf.json", 0, {}, io); }).code ==
          kExitIo);
  }
}

TEST_CASE("verify command") {
  Scratch tmp;
  Rng rng(52);
  const auto inst = random_gksl(3, 3, rng);
  write_json_file(tmp / "g.json", matrix_to_json(inst.gen.matrix()));
  const Run good = capture([&](Console io) { return cmd_verify(tmp / "g.json", {}, io); });
  CHECK(good.code == kExitOk);
  CHECK(good.out.find("FAIL") == std::string::npos);

  // ρ ↦ −Mρ − ρM† with M + M† ≠ 0
  write_json_file(tmp / "m.json", matrix_to_json((cplx(-1.0) * mover_superoperator(CMatrix::identity(2))).matrix()));
  const Run mover = capture([&](Console io) { return cmd_verify(tmp / "m.json", {}, io); });
  CHECK(mover.code == kExitValidation);
  CHECK(mover.err.find("trace_annihilation") != std::string::npos);

  CMatrix perturbed = inst.gen.matrix();
  perturbed += cplx(0.0, 1e-3) * gaussian_matrix(9, 9, rng);
  write_json_file(tmp / "p.json", matrix_to_json(perturbed));
  const Run broken = capture([&](Console io) { return cmd_verify(tmp / "p.json", {}, io); });
  CHECK(broken.code == kExitValidation);
  CHECK(broken.err.find("hermiticity_preservation") != std::string::npos);
}

TEST_CASE("evolve command") {
  Scratch tmp;
  write_json_file(tmp / "ad.json", matrix_to_json(build_generator(amplitude_damping()).matrix()));
  write_json_file(tmp / "rho.json", matrix_to_json(unit(1, 1, 2)));
  SUBCASE("amplitude damping decays as e^{-t}") {
    const Run r = capture(
        [&](Console io) { return cmd_evolve(tmp / "ad.json", tmp / "rho.json", "0:3:31", tmp / "t.csv", {}, io); });
    REQUIRE(r.code == kExitOk);
    const Csv csv = read_csv(tmp / "t.csv");
    REQUIRE(csv.rows.size() == 31);
    const std::size_t t = csv.column("time"), p = csv.column("rho_re_11");
    for (const auto& row : csv.rows) CHECK(std::abs(row[p] - std::exp(-row[t])) < 1e-9);
  }
  SUBCASE("zero generator keeps the state") {
    write_json_file(tmp / "zero.json", matrix_to_json(CMatrix(4, 4)));
    REQUIRE(capture([&](Console io) {
              return cmd_evolve(tmp / "zero.json", tmp / "rho.json", "0:1:5", tmp / "z.csv", {}, io);
            }).code == kExitOk);
    const Csv csv = read_csv(tmp / "z.csv");
    for (const auto& row : csv.rows)
      for (std::size_t c = 4; c < row.size(); ++c) CHECK(row[c] == csv.rows.front()[c]);
  }
  SUBCASE("dropout model file with a Gaussian packet keeps unit trace") {
    const std::size_t n = 100;
    write_json_file(tmp / "drop.json", standard_form_to_json(build_dropout({n, 0.1, DropoutVariant::hopping})));
    write_json_file(tmp / "packet.json", matrix_to_json(pure_state(gaussian_packet(n, 0.1, 5.0, 1.0))));
    REQUIRE(capture([&](Console io) {
              return cmd_evolve(tmp / "drop.json", tmp / "packet.json", "0:3:7", tmp / "d.csv", {}, io);
            }).code == kExitOk);
    const Csv csv = read_csv(tmp / "d.csv");
    CHECK(csv.header[4] == "rho_re_0_0");
    for (const auto& row : csv.rows) CHECK(std::abs(row[csv.column("trace_re")] - 1.0) < 1e-9);
  }
  SUBCASE("negative time range exits 2") {
    const Run r = capture(
        [&](Console io) { return cmd_evolve(tmp / "ad.json", tmp / "rho.json", "-1:2:5", tmp / "t.csv", {}, io); });
    CHECK(r.code == kExitValidation);
  }
}

TEST_CASE("model command") {
  Scratch tmp;
  SUBCASE("hopping dropout") {
    ModelOptions m;
    m.model = "dropout";
    m.sites = 100;
    m.spacing = 0.1;
    m.out = tmp / "drop.json";
    const Run r = capture([&](Console io) { return cmd_model(m, {}, io); });
    REQUIRE(r.code == kExitOk);
    const StandardFormDocument doc = standard_form_from_json(read_json_file(tmp / "drop.json"));
    CHECK(doc.form.dim() == 101);
    CHECK(verify_form_equality(doc.form) < 1e-12);
  }
  SUBCASE("sticking with real w has no jumps") {
    ModelOptions m;
    m.model = "sticking";
    m.sites = 20;
    m.w = "0+0i";
    m.out = tmp / "stick.json";
    REQUIRE(capture([&](Console io) { return cmd_model(m, {}, io); }).code == kExitOk);
    CHECK(read_json_file(tmp / "stick.json")["kraus"].empty());
  }
  SUBCASE("negative Im(w) exits 2") {
    ModelOptions m;
    m.model = "sticking";
    m.w = "0-1i";
    const Run r = capture([&](Console io) { return cmd_model(m, {}, io); });
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("would violate accretivity") != std::string::npos);
  }
  SUBCASE("unknown model or variant exits 2") {
    ModelOptions m;
    m.model = "teleport";
    CHECK(capture([&](Console io) { return cmd_model(m, {}, io); }).code == kExitValidation);
    m.model = "dropout";
    m.variant = "sideways";
    CHECK(capture([&](Console io) { return cmd_model(m, {}, io); }).code == kExitValidation);
  }
  SUBCASE("trajectory output") {
    ModelOptions m;
    m.model = "dropout";
    m.sites = 60;
    m.spacing = 0.2;
    m.times = "0:2:5";
    m.evolve_csv = tmp / "traj.csv";
    REQUIRE(capture([&](Console io) { return cmd_model(m, {}, io); }).code == kExitOk);
    CHECK(read_csv(tmp / "traj.csv").rows.size() == 5);
  }
  SUBCASE("upwind refinement table has first-order deficit ratios") {
    ModelOptions m;
    m.model = "dropout";
    m.variant = "upwind";
    m.sites = 50;
    m.spacing = 0.16;
    m.times = "0:3:2";
    m.refine = 3;
    const Run r = capture([&](Console io) { return cmd_model(m, {}, io); });
    REQUIRE(r.code == kExitOk);
    std::stringstream lines(r.out.substr(r.out.find("level,h,N")));
    std::string line;
    std::getline(lines, line);
    std::vector<double> ratios;
    while (std::getline(lines, line)) {
      const std::string last = line.substr(line.rfind(',') + 1);
      if (!last.empty()) ratios.push_back(std::stod(last));
    }
    REQUIRE(ratios.size() == 3);
    for (double q : ratios) {
      CHECK(q >= 1.5);
      CHECK(q <= 2.5);
    }
  }
}

TEST_CASE("binary exit codes") {
  Scratch tmp;
  write_json_file(tmp / "bad.json", standard_form_to_json(StandardForm(CMatrix(2, 2), {sigma_minus()})));
  write_json_file(tmp / "t.json", matrix_to_json(SuperOperator::transpose_map(2).matrix()));
  write_json_file(tmp / "ad.json", matrix_to_json(build_generator(amplitude_damping()).matrix()));
  write_json_file(tmp / "rho.json", matrix_to_json(unit(1, 1, 2)));
  const std::string dir = (tmp / "").string();

  CHECK(run_binary("build " + dir + "bad.json -o " + dir + "o.json") == 2);
  CHECK(run_binary("decompose " + dir + "t.json -o " + dir + "o.json") == 2);
  CHECK(run_binary("evolve " + dir + "ad.json --rho0 " + dir + "rho.json --times -1:1:3 -o " + dir + "o.csv") == 2);
  CHECK(run_binary("evolve " + dir + "ad.json --rho0 " + dir + "rho.json --times 0:1:3 -o " + dir + "o.csv") == 0);
  CHECK(run_binary("verify " + dir + "missing.json") == 1);
  CHECK(run_binary("--no-such-flag") == 1);
  CHECK(run_binary("model --model sticking --w 0-1i") == 2);
}
