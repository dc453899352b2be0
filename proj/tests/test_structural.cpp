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
#include <random>

#include "oracles.hpp"
#include "qlin/core_model.hpp"
#include "qlin/errors.hpp"
#include "qlin/scenarios.hpp"
#include "qlin/structural.hpp"

using namespace qlin;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

StateSpaceModel measured(const QuantumLinearSystem& sys) {
  return to_state_space(sys, default_measurement(sys));
}

// (m, omega, kappa, gamma) = (1, 1, 1, 2), g = 1.
StateSpaceModel tsang_caves_loop() { return measured(build_scenario("tsang_caves")); }

Matrix columns(std::initializer_list<std::initializer_list<double>> cols) {
  const Matrix t = mat(cols);
  return t.transpose();
}

}  // namespace

TEST_SUITE("structural") {

TEST_CASE("controllability matrix of a static system") {
  const StateSpaceModel m = StateSpaceModel(Matrix::Zero(3, 3)).with_input("u", Matrix::Identity(3, 3));
  const Matrix k = controllability_matrix(m, {"u"});
  CHECK(k.cols() == 9);
  CHECK(max_abs(k.leftCols(3) - Matrix::Identity(3, 3)) == 0.0);
  CHECK(max_abs(k.rightCols(6)) == 0.0);
  CHECK_THROWS_AS(controllability_matrix(m, {"v"}), LookupError);
}

TEST_CASE("observability matrix of a static system") {
  const StateSpaceModel m = StateSpaceModel(Matrix::Zero(2, 2)).with_output("y", Matrix::Identity(2, 2));
  const Matrix o = observability_matrix(m, {"y"});
  CHECK(o.rows() == 4);
  CHECK(max_abs(o.topRows(2) - Matrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(o.bottomRows(2)) == 0.0);
}

TEST_CASE("michelson dark port reaches only the differential mode") {
  const auto ss = measured(michelson(MichelsonParams{}));
  const Matrix k = controllability_matrix(ss, {"W2"});
  CHECK(oracle::rank(k) == 2);
  CHECK(controllable_subspace(ss, {"W2"}).rank() == 2);
  const Matrix diff = columns({{1, 0, -1, 0}, {0, 1, 0, -1}});
  CHECK(oracle::projector_gap(controllable_subspace(ss, {"W2"}).basis, diff) < 1e-10);
}

TEST_CASE("reduced optomechanics is observable from y") {
  const auto ss = measured(optomech_reduced(2.0, 1.0, 3.0));
  const Matrix o = observability_matrix(ss, {"y"});
  CHECK(oracle::rank(o) == 2);
  CHECK(max_abs(o.topRows(1) - std::sqrt(3.0) * mat({{1, 0}})) < 1e-14);
  CHECK(max_abs(o.row(1) - std::sqrt(3.0) * mat({{0, 0.5}})) < 1e-14);
  CHECK(observable_subspace(ss, {"y"}).rank() == 2);
}

TEST_CASE("closed loop controllable range matches the four printed vectors") {
  const double k = 1, g = 1, w = 1, m = 1;
  const auto ss = tsang_caves_loop();
  const Matrix printed = columns({{0, 0, 1, 0, 0, 0},
                                  {0, 0, 0, 1, 0, 0},
                                  {0, k, 0, 0, 0, g},
                                  {k / m, 0, 0, 0, -g * w, 0}});
  const Subspace r = controllable_subspace(ss, {"W"});
  CHECK(r.rank() == 4);
  CHECK(oracle::rank(controllability_matrix(ss, {"W"})) == 4);
  CHECK(oracle::projector_gap(r.basis, printed) < 1e-10);
  CHECK(oracle::projector_gap(range(controllability_matrix(ss, {"W1"})).basis, printed) < 1e-10);
}

TEST_CASE("closed loop unobservable kernel matches the three printed vectors") {
  const double k = 1, g = 1, w = 1, m = 1;
  const auto ss = tsang_caves_loop();
  const Matrix printed = columns({{0, 0, 1, 0, 0, 0},
                                  {0, g * w, 0, 0, 0, k / m},
                                  {-g, 0, 0, 0, k, 0}});
  const Subspace ker = kernel(observability_matrix(ss, {"y"}));
  CHECK(ker.rank() == 3);
  CHECK(oracle::projector_gap(ker.basis, printed) < 1e-10);
  CHECK(complement(observable_subspace(ss, {"y"})).rank() == 3);
}

TEST_CASE("QND pair lies in the uncontrollable and observable intersection") {
  const auto ss = tsang_caves_loop();
  const Subspace unc = kernel(controllability_matrix(ss, {"W"}).transpose());
  const Subspace obs = range(observability_matrix(ss, {"y"}).transpose());
  const Subspace both = intersect(unc, obs);
  CHECK(both.rank() == 2);
  CHECK(both.rank() == oracle::intersection_dim(unc.basis, obs.basis));
  CHECK(both.contains(vec({0, -1, 0, 0, 0, 1})));
  CHECK(both.contains(vec({1, 0, 0, 0, 1, 0})));
  CHECK_FALSE(both.contains(vec({1, 0, 0, 0, 0, 0})));
}

TEST_CASE("range kernel complement basics") {
  const Subspace k = kernel(mat({{1, 0}, {0, 0}}));
  REQUIRE(k.rank() == 1);
  CHECK(std::abs(std::abs(k.basis(1, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(k.basis(0, 0)) < 1e-15);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = oracle::gaussian(rng, 6, 1 + t % 5);
    const Subspace s = range(x);
    CHECK(s.rank() == oracle::rank(x));
    CHECK(max_abs(s.basis.transpose() * s.basis - Matrix::Identity(s.rank(), s.rank())) < 1e-12);
    const Subspace c = complement(s);
    CHECK(c.rank() + s.rank() == 6);
    CHECK(intersect(s, c).empty());
    CHECK(sum(s, c).rank() == 6);
  }
  CHECK_THROWS_AS(intersect(Subspace::full(3), Subspace::full(4)), ShapeError);
}

TEST_CASE("subspace helpers") {
  const Subspace b = Subspace::coordinate_block(5, 1, 2);
  CHECK(b.rank() == 2);
  CHECK(b.contains(vec({0, 1, 2, 0, 0})));
  CHECK(b.relative_distance(vec({1, 0, 0, 0, 0})) == doctest::Approx(1.0));
  CHECK(max_abs(b.projector() - b.projector() * b.projector()) < 1e-15);
  CHECK(Subspace::zero(4).empty());
  CHECK(Subspace::full(4).rank() == 4);
}

TEST_CASE("principal angles between lines in the plane") {
  for (double th : {1e-9, 1e-4, 0.3, 1.2}) {
    const Subspace a = range(mat({{1}, {0}}));
    const Subspace b = range(mat({{std::cos(th)}, {std::sin(th)}}));
    const Vector ang = principal_angles(a, b);
    REQUIRE(ang.size() == 1);
    CHECK(std::abs(ang(0) - th) < 1e-15 + 1e-12 * th);
    CHECK(subspace_distance(a, b) == doctest::Approx(th));
  }
}

TEST_CASE("trivial decomposition for a controllable system") {
  const auto ss = measured(optomech_reduced(1, 1, 1));
  const auto kd = kalman_decompose(ss, {"W"}, DecompositionKind::kControllable);
  CHECK(kd.primary_dim == 2);
  CHECK(kd.residual_dim == 0);
  CHECK(kd.structural_defect({"W"}) < 1e-12);
}

TEST_CASE("michelson common and differential modes") {
  const MichelsonParams p;
  const auto ss = measured(michelson(p));
  const auto kd = kalman_decompose(ss, {"W2"}, DecompositionKind::kControllable);
  CHECK(kd.primary_dim == 2);
  CHECK(kd.residual_dim == 2);
  const Matrix& at = kd.transformed.A();
  CHECK(max_abs(at.block(0, 2, 2, 2)) < 1e-12);
  CHECK(max_abs(at.block(2, 0, 2, 2)) < 1e-12);
  // Both blocks are the oscillator with frequency omega.
  for (Index off : {0, 2}) {
    const Matrix blk = at.block(off, off, 2, 2);
    CHECK(std::abs(blk.trace()) < 1e-12);
    CHECK(std::abs(blk.determinant() - p.omega * p.omega) < 1e-12);
  }
  const Matrix t = kd.T;
  CHECK(max_abs(t.transpose() * t - Matrix::Identity(4, 4)) < 1e-12);
  CHECK(max_abs(t.transpose() * ss.A() * t - at) < 1e-12);
}

TEST_CASE("planted uncontrollable block is recovered") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = oracle::gaussian(rng, 6, 6);
    a.block(4, 0, 2, 4).setZero();
    Matrix b = oracle::gaussian(rng, 6, 2);
    b.bottomRows(2).setZero();
    const Matrix t = oracle::gaussian(rng, 6, 6) + 3 * Matrix::Identity(6, 6);
    const Matrix ti = t.inverse();
    const StateSpaceModel ss = StateSpaceModel(t * a * ti).with_input("u", t * b);
    const auto kd = kalman_decompose(ss, {"u"}, DecompositionKind::kControllable);
    CHECK(kd.primary_dim == 4);
    CHECK(kd.residual_dim == 2);
    CHECK(kd.structural_defect({"u"}) < 1e-10);
  }
}

TEST_CASE("observable decomposition zero pattern") {
  std::mt19937_64 rng(9);
  Matrix a = oracle::gaussian(rng, 5, 5);
  a.block(0, 3, 3, 2).setZero();
  Matrix c = oracle::gaussian(rng, 2, 5);
  c.rightCols(2).setZero();
  const Matrix t = oracle::random_orthogonal(rng, 5);
  const StateSpaceModel ss = StateSpaceModel(t * a * t.transpose()).with_output("y", c * t.transpose());
  const auto kd = kalman_decompose(ss, {"y"}, DecompositionKind::kObservable);
  CHECK(kd.primary_dim == 3);
  CHECK(kd.residual_dim == 2);
  CHECK(kd.structural_defect({"y"}) < 1e-10);
}

TEST_CASE("markov parameters") {
  const StateSpaceModel z = StateSpaceModel(Matrix::Zero(2, 2))
                                .with_input("u", mat({{1}, {2}}))
                                .with_output("y", mat({{3, 4}}));
  const auto mk = markov_parameters(z, {"u"}, {"y"});
  REQUIRE(mk.size() == 2);
  CHECK(mk[0](0, 0) == 11.0);
  CHECK(mk[1](0, 0) == 0.0);
  CHECK(markov_parameters(z, {"u"}, {"y"}, 5).size() == 5);

  const double m = 2, lam = 3;
  const auto ss = measured(optomech_reduced(m, 0.7, lam));
  const auto bp = markov_parameters(ss, {"P"}, {"y"});
  CHECK(std::abs(bp[0](0, 0)) < 1e-15);
  CHECK(std::abs(std::abs(bp[1](0, 0)) - lam / m) < 1e-14);
  const auto ref = oracle::markov(ss.A(), ss.B({"P"}), ss.C({"y"}), 2);
  CHECK(std::abs(ref[1](0, 0) - bp[1](0, 0)) < 1e-14);
}

TEST_CASE("back-action path of the closed loop vanishes") {
  const auto ss = tsang_caves_loop();
  const auto mk = markov_parameters(ss, {"P"}, {"y"});
  CHECK(mk.size() == 6);
  for (const auto& x : mk) CHECK(max_abs(x) < 1e-10);
}

TEST_CASE("classical subsystem detection") {
  const auto ss = tsang_caves_loop();
  const SymplecticForm f = SymplecticForm::of(3);
  const Subspace qnd = range(columns({{0, -1, 0, 0, 0, 1}, {1, 0, 0, 0, 1, 0}}));
  CHECK(classical_subsystem(ss, qnd, f));
  const Subspace pair = Subspace::coordinate_block(6, 0, 2);
  CHECK_FALSE(classical_subsystem(ss, pair, f));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) CHECK(classical_subsystem(ss, range(oracle::gaussian(rng, 6, 1)), f));
}

}  // TEST_SUITE
