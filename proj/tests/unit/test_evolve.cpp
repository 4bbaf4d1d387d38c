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

#include "qsg/evolve.hpp"
#include "test_support.hpp"

using namespace qsg;
using namespace qsg::testing;

namespace {

StandardForm amplitude_damping() { return StandardForm(CMatrix{{0.0, 0.0}, {0.0, 0.5}}, {sigma_minus()}); }

}  // namespace

TEST_CASE("propagate closed forms") {
  const SuperOperator ad = build_generator(amplitude_damping());
  SUBCASE("t = 0 returns the input") {
    Rng rng(40);
    const CMatrix rho = gaussian_matrix(2, 2, rng);
    CHECK(propagate(ad, rho, 0.0) == rho);
  }
  SUBCASE("amplitude damping: excited population e^{-t}, coherence e^{-t/2}") {
    for (double t : {0.1, 1.0, 3.0, 7.5}) {
      const CMatrix excited = propagate(ad, unit(1, 1, 2), t);
      CHECK(excited(1, 1).real() == doctest::Approx(std::exp(-t)).epsilon(1e-13));
      CHECK(excited(0, 0).real() == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-13));
      const CMatrix coherence = propagate(ad, unit(0, 1, 2), t);
      CHECK(std::abs(coherence(0, 1) - std::exp(-0.5 * t)) < 1e-13);
    }
  }
  SUBCASE("Hamiltonian flow is unitary conjugation") {
    const SuperOperator gen = build_generator(StandardForm(cplx(0.0, 1.0) * sigma_z(), {}));
    const CVector plus = {std::sqrt(0.5), std::sqrt(0.5)};
    for (double t : {0.3, 1.7}) {
      // U_t = exp(−itσ_z)
      const CMatrix u = CMatrix{{std::polar(1.0, -t), 0.0}, {0.0, std::polar(1.0, t)}};
      const CMatrix expected = naive_matmul(naive_matmul(u, pure_state(plus)), naive_adjoint(u));
      CHECK(relative_difference(propagate(gen, pure_state(plus), t), expected) < 1e-13);
    }
  }
  CHECK_THROWS_AS(propagate(ad, unit(0, 0, 2), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(propagate(ad, CMatrix(3, 3), 1.0), DimensionError);
}

TEST_CASE("trajectory") {
  SUBCASE("zero generator keeps the state") {
    Rng rng(41);
    const CMatrix rho = random_density(3, rng);
    const std::vector<double> times = {0.0, 0.5, 2.0};
    const Trajectory tr = trajectory(SuperOperator::zero(3), rho, times);
    REQUIRE(tr.states.size() == 3);
    for (const auto& s : tr.states) CHECK(s == rho);
    CHECK(tr.warnings.empty());
  }
  SUBCASE("amplitude damping keeps unit trace") {
    const std::vector<double> times = {0.0, 1.0, 2.0};
    const Trajectory tr = trajectory(build_generator(amplitude_damping()), unit(1, 1, 2), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(std::abs(tr.diagnostics[i].trace_re - 1.0) < 1e-9);
      CHECK(tr.states[i](1, 1).real() == doctest::Approx(std::exp(-times[i])).epsilon(1e-12));
      CHECK(tr.diagnostics[i].trace_norm == doctest::Approx(1.0));
    }
  }
  SUBCASE("non-density initial states produce warnings, not errors") {
    const std::vector<double> times = {0.0, 1.0};
    const Trajectory tr = trajectory(SuperOperator::zero(2), sigma_z(), times);
    CHECK(tr.warnings.size() == 2);
    const Trajectory tr2 = trajectory(SuperOperator::zero(2), sigma_minus(), times);
    CHECK_FALSE(tr2.warnings.empty());
  }
  SUBCASE("invalid time grids") {
    const SuperOperator zero = SuperOperator::zero(2);
    CHECK_THROWS_AS(trajectory(zero, unit(0, 0, 2), std::vector<double>{1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(trajectory(zero, unit(0, 0, 2), std::vector<double>{-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(trajectory(zero, unit(0, 0, 2), std::vector<double>{}), std::invalid_argument);
  }
  SUBCASE("nonzero start time is reached before the first sample") {
    const std::vector<double> times = {1.0, 2.0};
    const Trajectory tr = trajectory(build_generator(amplitude_damping()), unit(1, 1, 2), times);
    CHECK(tr.states[0](1, 1).real() == doctest::Approx(std::exp(-1.0)));
  }
}

TEST_CASE("finite-difference generator recovery") {
  const std::vector<double> deltas = {1e-2, 5e-3, 2.5e-3};
  SUBCASE("zero generator") {
    for (double r : finite_difference_generator(SuperOperator::zero(2), unit(0, 0, 2), deltas)) CHECK(r == 0.0);
  }
  SUBCASE("amplitude damping halves") {
    const auto r = finite_difference_generator(build_generator(amplitude_damping()), unit(1, 1, 2), deltas);
    for (double ratio : successive_ratios(r)) CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("commutator halves") {
    const SuperOperator gen = build_generator(StandardForm(cplx(0.0, 1.0) * sigma_x(), {}));
    const auto r = finite_difference_generator(gen, unit(0, 0, 2), deltas);
    for (double ratio : successive_ratios(r)) CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
  }
  CHECK_THROWS_AS(finite_difference_generator(SuperOperator::zero(2), unit(0, 0, 2), std::vector<double>{1e-3, 1e-2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(finite_difference_generator(SuperOperator::zero(2), unit(0, 0, 2), std::vector<double>{0.0}),
                  std::invalid_argument);
}

TEST_CASE("successive ratios") {
  const std::vector<double> v = {4.0, 2.0, 0.5};
  CHECK(successive_ratios(v) == std::vector<double>{0.5, 0.25});
  CHECK(successive_ratios(std::vector<double>{1.0}).empty());
}

TEST_CASE("semigroup property and conservation on random generators") {
  Rng rng(42);
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto inst = random_gksl(d, d, rng);
    const CMatrix rho = random_density(d, rng);
    CHECK(semigroup_property_check(inst.gen, rho, 0.0, 0.9) == 0.0);
    CHECK(semigroup_property_check(inst.gen, rho, 0.7, 0.7) < 1e-9);
    for (double t : {0.5, 3.0, 10.0}) {
      const StepDiagnostics diag = diagnose(propagate(inst.gen, rho, t));
      CHECK(std::abs(diag.trace_re - 1.0) < 1e-9);
      CHECK(diag.min_eig > -1e-8);
      CHECK(contraction_norm(inst.form.m(), t) <= 1.0 + 1e-9);
    }
  }
  CHECK_THROWS_AS(semigroup_property_check(SuperOperator::zero(2), unit(0, 0, 2), -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("diagnostics") {
  const StepDiagnostics d = diagnose(CMatrix{{0.75, 0.0}, {0.0, -0.25}});
  CHECK(d.trace_re == doctest::Approx(0.5));
  CHECK(d.min_eig == doctest::Approx(-0.25));
  CHECK(d.trace_norm == doctest::Approx(1.0));
  // non-Hermitian input falls back to singular values
  CHECK(diagnose(sigma_minus()).trace_norm == doctest::Approx(1.0));
}

TEST_CASE("operator-form generator agrees with the superoperator") {
  Rng rng(43);
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto inst = random_gksl(d, d, rng);
    const OperatorFormGenerator op(inst.form);
    CHECK(op.dim() == d);
    const CMatrix rho = random_density(d, rng);
    CHECK(relative_difference(op.apply(rho), inst.gen.apply(rho)) < 1e-13);
    for (double t : {0.0, 0.4, 3.0}) {
      CHECK(relative_difference(op.propagate(rho, t), propagate(inst.gen, rho, t)) < 1e-11);
    }
    const std::vector<double> times = {0.0, 1.0, 2.5};
    const Trajectory a = op.trajectory(rho, times);
    const Trajectory b = trajectory(inst.gen, rho, times);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(relative_difference(a.states[i], b.states[i]) < 1e-11);
  }
}

TEST_CASE("operator-form generator on sparse and degenerate forms") {
  SUBCASE("zero form") {
    const OperatorFormGenerator op(StandardForm(CMatrix(3, 3), {}));
    CHECK(op.norm_bound() == 0.0);
    CHECK(op.propagate(unit(1, 1, 3), 5.0) == unit(1, 1, 3));
  }
  SUBCASE("form equality is not required") {
    const StandardForm leaky(CMatrix{{1.0, 0.0}, {0.0, 0.0}}, {});
    const CMatrix rho = OperatorFormGenerator(leaky).propagate(unit(0, 0, 2), 1.0);
    CHECK(rho(0, 0).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  }
  SUBCASE("amplitude damping") {
    const CMatrix rho = OperatorFormGenerator(amplitude_damping()).propagate(unit(1, 1, 2), 2.0);
    CHECK(rho(1, 1).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  }
  SUBCASE("norm bound dominates the true norm") {
    Rng rng(44);
    const auto inst = random_gksl(4, 3, rng);
    CHECK(OperatorFormGenerator(inst.form).norm_bound() >= operator_norm(inst.gen.matrix()) * (1.0 - 1e-12));
  }
  CHECK_THROWS_AS(OperatorFormGenerator(amplitude_damping()).propagate(unit(0, 0, 2), -1.0), std::invalid_argument);
}
