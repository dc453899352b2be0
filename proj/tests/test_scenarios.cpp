// Copyright 2026 The qlin Authors
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

#include <cmath>

#include "oracles.hpp"
#include "qlin/core_model.hpp"
#include "qlin/errors.hpp"
#include "qlin/goals.hpp"
#include "qlin/interconnect.hpp"
#include "qlin/scenarios.hpp"
#include "qlin/structural.hpp"
#include "qlin/xfer.hpp"

using namespace qlin;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

StateSpaceModel measured(const QuantumLinearSystem& sys) {
  return to_state_space(sys, default_measurement(sys));
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("two-port cavity") {
  const auto sys = two_port_cavity(1, 1);
  CHECK(max_abs(sys.drift() + 2 * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(sys.C().topRows(2) - std::sqrt(2.0) * Matrix::Identity(2, 2)) < 1e-15);
  const auto one = two_port_cavity(0.5, 0);
  CHECK(max_abs(one.drift() + 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(one.C().bottomRows(2)) == 0.0);
  const auto ss = to_state_space(sys, std::nullopt);
  CHECK(oracle::rank(oracle::ctrb(ss.A(), ss.B({"W"}))) == 2);
}

TEST_CASE("reduced optomechanics") {
  const auto sys = optomech_reduced(1, 1, 0);
  CHECK(max_abs(sys.C()) == 0.0);
  CHECK(max_abs(sys.drift() - mat({{0, 1}, {-1, 0}})) < 1e-15);
  REQUIRE(default_measurement(optomech_reduced(1, 1, 1)).has_value());
  CHECK(max_abs(default_measurement(optomech_reduced(1, 1, 1))->split.M1 - mat({{0, 1}})) < 1e-15);
  CHECK(max_abs(*sys.force() - vec({0, 1})) == 0.0);
}

TEST_CASE("full optomechanics matrices") {
  const double m = 2, w = 0.5, k = 0.3, g = 4;
  const auto sys = optomech_full(m, w, k, g);
  const Matrix a = mat({{0, 1 / m, 0, 0}, {-m * w * w, 0, k, 0}, {0, 0, -g, 0}, {k, 0, 0, -g}});
  CHECK(max_abs(sys.drift() - a) < 1e-14);
  CHECK(max_abs(sys.C() - std::sqrt(2 * g) * mat({{0, 0, 1, 0}, {0, 0, 0, 1}})) < 1e-14);
  const auto free = optomech_full(m, w, 0, g);
  CHECK(max_abs(free.drift().topRightCorner(2, 2)) == 0.0);
  CHECK(max_abs(free.drift().bottomLeftCorner(2, 2)) == 0.0);
}

TEST_CASE("eliminating a fast cavity recovers the reduced oscillator") {
  const double m = 1, w = 1, k = 3, gam = 60;
  const double lam = 2 * k * k / gam;
  const auto full = measured(optomech_full(m, w, k, gam));
  const auto red = measured(optomech_reduced(m, w, lam));
  const Complex s(0, w / 10);
  const Complex a = evaluate(transfer_function(full, {"F"}, {"y"}), s)(0, 0);
  const Complex b = evaluate(transfer_function(red, {"F"}, {"y"}), s)(0, 0);
  CHECK(std::abs(std::abs(a) / std::abs(b) - 1.0) < 0.05);
}

TEST_CASE("michelson matrices") {
  const MichelsonParams p{2.0, 0.1, 3.0, 1.0};
  const auto sys = michelson(p);
  const double k = p.m * p.omega * p.omega;
  const Matrix a = mat({{0, 1 / p.m, 0, 0}, {-k, 0, 0, 0}, {0, 0, 0, 1 / p.m}, {0, 0, -k, 0}});
  CHECK(max_abs(sys.drift() - a) < 1e-14);
  const double s = std::sqrt(p.lambda);
  CHECK(max_abs(sys.C() - s * mat({{0, 0, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 0}, {1, 0, -1, 0}})) == 0.0);
  CHECK(max_abs(*sys.force() - vec({0, 1, 0, -1})) == 0.0);
  // The force never reaches the amplitude quadrature of the dark port.
  const auto ss = to_state_space(sys, std::nullopt);
  const Matrix q2 = ss.C({"W2out"}).topRows(1);
  for (const auto& mk : oracle::markov(ss.A(), ss.B({"F"}), q2, 4)) CHECK(max_abs(mk) == 0.0);
  CHECK_THROWS_AS(michelson({0, 1, 1, 1}), DomainError);
}

TEST_CASE("atomic ensemble") {
  const auto sys = atomic_ensemble_linear(0.5);
  CHECK(max_abs(sys.drift()) < 1e-15);
  const auto ss = measured(sys);
  CHECK(max_abs(ss.C({"y"}) - mat({{0, std::sqrt(0.5)}})) < 1e-15);
  const auto iso = atomic_ensemble_linear(0);
  CHECK(max_abs(iso.C()) == 0.0);
}

TEST_CASE("memory storage stage") {
  CHECK_THROWS_AS(lambda_memory(1, 0, 1, 0.5), PreconditionError);
  const auto sys = lambda_memory(1, 0, 0);
  CHECK(max_abs(sys.drift().block(0, 2, 2, 4)) == 0.0);
  CHECK(max_abs(sys.drift().block(2, 4, 2, 2)) == 0.0);
  const auto v = find_dfs(to_state_space(lambda_memory(1, 0.5, 1), std::nullopt), {"W"}, {"Wout"});
  CHECK(v.witnesses.size() == 2);
}

TEST_CASE("cancelling controller") {
  const auto k = tsang_caves_controller(1, 1, 1, 2);
  CHECK(max_abs(k.G_K + Matrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(k.C1 + k.C2) == 0.0);
  CHECK(std::abs(std::abs(k.C1(1, 0)) - 1.0 / 2.0) < 1e-15);
  const auto ss = measured(build_scenario("tsang_caves"));
  CHECK(check_bae(ss, {"P"}, {"y"}).achieved);
  for (double g : {0.8, 1.25}) {
    const auto loop = cf_type1(optomech_full(1, 1, 1, 2), tsang_caves_controller(1, 1, 1, 2, g));
    CHECK_FALSE(check_bae(measured(loop), {"P"}, {"y"}).achieved);
  }
}

TEST_CASE("coherent feedback parameters") {
  const auto a = michelson_cf_params({1, 1, 1, 1});
  CHECK(a.epsilon == doctest::Approx(std::sqrt(2.0) / std::sqrt(1 + std::sqrt(5.0))).epsilon(1e-14));
  CHECK(a.alpha == doctest::Approx(-1.0 / a.epsilon).epsilon(1e-14));
  const auto b = michelson_cf_params({1, 1e-4, 4, 1});
  CHECK(std::abs(b.epsilon - 2.0) < 1e-4);
  CHECK(std::abs(b.alpha + 2.0) < 1e-4);
  const MichelsonParams p{1, 0.3, 0.7, 1};
  const auto ss = measured(cf_type2(michelson(p), michelson_cf_controller(p)));
  CHECK(check_bae(ss, {"P"}, {"y"}).achieved);
  const Matrix q2 = ss.C({"Wout"}).topRows(1);
  for (const auto& mk : oracle::markov(ss.A(), ss.B({"F"}), q2, 6)) CHECK(max_abs(mk) < 1e-10);
}

TEST_CASE("closed loop contains a classical subsystem") {
  const auto ss = measured(build_scenario("tsang_caves"));
  const auto v = find_qnd(ss, {"W"}, {"y"});
  CHECK(classical_subsystem(ss, v.witness_space(6), SymplecticForm::of(3)));
}

TEST_CASE("registry") {
  for (const auto& s : scenario_registry()) {
    const auto a = build_scenario(s.name);
    const auto b = build_scenario(s.name);
    CHECK(max_abs(a.G() - b.G()) == 0.0);
    CHECK(max_abs(a.C() - b.C()) == 0.0);
    CHECK(a.realizability_defect() <= 1e-12 * std::max(1.0, max_abs(a.G())));
  }
  CHECK_THROWS_AS(find_scenario("nope"), LookupError);
  const auto cav = build_scenario("two_port_cavity", {{"kappa1", 3.0}});
  CHECK(cav.drift()(0, 0) == doctest::Approx(-4.0));
  CHECK_THROWS_AS(build_scenario("two_port_cavity", {{"bogus", 3.0}}), ValidationError);
}

}  // TEST_SUITE
