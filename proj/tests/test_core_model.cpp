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
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qlin/core_model.hpp"
#include "qlin/errors.hpp"
#include "qlin/scenarios.hpp"

using namespace qlin;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// The seven identities written out directly.
double split_defect(const MeasurementSplit& s) {
  const Matrix sg = oracle::sigma(s.m);
  const Matrix i = Matrix::Identity(s.m, s.m);
  double d = 0;
  d = std::max(d, max_abs(s.M1 * sg * s.M1.transpose()));
  d = std::max(d, max_abs(s.M1 * s.M1.transpose() - i));
  d = std::max(d, max_abs(s.M2 * sg * s.M2.transpose()));
  d = std::max(d, max_abs(s.M2 * s.M2.transpose() - i));
  d = std::max(d, max_abs(s.M1 * sg * s.M2.transpose() - i));
  d = std::max(d, max_abs(s.M1 * s.M2.transpose()));
  d = std::max(d, max_abs(s.M1.transpose() * s.M1 + s.M2.transpose() * s.M2 -
                          Matrix::Identity(2 * s.m, 2 * s.m)));
  return d;
}

}  // namespace

TEST_SUITE("core_model") {

TEST_CASE("symplectic form identities") {
  for (Index n : {1, 2, 5}) {
    const Matrix s = sigma(n);
    CHECK(max_abs(s + s.transpose()) == 0.0);
    CHECK(max_abs(s * s.transpose() - Matrix::Identity(2 * n, 2 * n)) == 0.0);
    CHECK(max_abs(s * s + Matrix::Identity(2 * n, 2 * n)) == 0.0);
    CHECK(max_abs(SymplecticForm::of(n).matrix - oracle::sigma(n)) == 0.0);
  }
}

TEST_CASE("single lossy cavity drift") {
  const auto sys = build_system(Matrix::Zero(2, 2), std::sqrt(2.0) * Matrix::Identity(2, 2));
  CHECK(max_abs(sys.drift() + Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(sys.noise_input() + std::sqrt(2.0) * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(sys.modes() == 1);
  CHECK(sys.channel_count() == 1);
  CHECK(sys.channels()[0].label == "W1");
  CHECK(sys.mode_labels()[0] == "a1");
}

TEST_CASE("isolated mode") {
  const auto sys = build_system(Matrix::Zero(2, 2), Matrix::Zero(2, 2));
  CHECK(max_abs(sys.drift()) == 0.0);
  CHECK(max_abs(sys.noise_input()) == 0.0);
}

TEST_CASE("reduced optomechanical oscillator matrices") {
  const double m = 2.0, w = 0.5, lam = 3.0;
  const auto sys = optomech_reduced(m, w, lam);
  CHECK(max_abs(sys.drift() - mat({{0, 1 / m}, {-m * w * w, 0}})) < 1e-14);
  CHECK(max_abs(sys.C() - std::sqrt(lam) * mat({{0, 0}, {1, 0}})) < 1e-14);
}

TEST_CASE("build_system rejects bad input") {
  CHECK_THROWS_AS(build_system(mat({{0, 1}, {0, 0}}), Matrix::Zero(2, 2)), ValidationError);
  CHECK_THROWS_AS(build_system(Matrix::Zero(3, 3), Matrix::Zero(2, 3)), ShapeError);
  CHECK_THROWS_AS(build_system(Matrix::Zero(2, 2), Matrix::Zero(3, 2)), ShapeError);
  CHECK_THROWS_AS(build_system(Matrix::Zero(2, 2), Matrix::Zero(2, 4)), ShapeError);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(build_system(bad, Matrix::Zero(2, 2)), ValidationError);
  CHECK_THROWS_AS(build_system(Matrix::Zero(2, 2), Matrix::Zero(2, 2), {}, vec({1, 2, 3})),
                  ShapeError);
  CHECK_THROWS_AS(build_system(Matrix::Zero(2, 2), Matrix::Zero(4, 2),
                               {{"a", ChannelRole::kFeedback, std::nullopt},
                                {"a", ChannelRole::kFeedback, std::nullopt}}),
                  ValidationError);
}

TEST_CASE("nearly symmetric G is symmetrized") {
  Matrix g = mat({{1, 2}, {2, 3}});
  g(0, 1) += 1e-14;
  const auto sys = build_system(g, Matrix::Zero(2, 2));
  CHECK(sys.G()(0, 1) == sys.G()(1, 0));
}

TEST_CASE("homodyne selectors") {
  const auto p = homodyne_split(std::vector<Quadrature>{Quadrature::kP});
  CHECK(max_abs(p.M1 - mat({{0, 1}})) == 0.0);
  CHECK(max_abs(p.M2 - mat({{-1, 0}})) == 0.0);
  CHECK(split_defect(p) < 1e-15);

  const auto q = homodyne_split(std::vector<Quadrature>{Quadrature::kQ});
  CHECK(max_abs(q.M1 - mat({{1, 0}})) == 0.0);
  CHECK(max_abs(q.M2 - mat({{0, 1}})) == 0.0);

  const auto pp = homodyne_split(std::vector<Quadrature>{Quadrature::kP, Quadrature::kP});
  CHECK(max_abs(pp.M1 - mat({{0, 1, 0, 0}, {0, 0, 0, 1}})) == 0.0);
  CHECK(split_defect(pp) < 1e-15);
  CHECK(pp.defect() < 1e-15);
  CHECK(pp.stacked().rows() == 4);
}

TEST_CASE("angle splits satisfy the seven identities") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + trial % 5;
    std::vector<double> angles;
    for (Index j = 0; j < m; ++j) angles.push_back(u(rng));
    const auto s = homodyne_split(angles);
    CHECK(split_defect(s) <= 1e-12 * static_cast<double>(m));
    CHECK_NOTHROW(s.validate());
  }
}

TEST_CASE("split from symplectic orthogonal matrix") {
  std::mt19937_64 rng(5);
  for (Index m = 1; m <= 4; ++m) {
    const auto s = split_from_symplectic(oracle::random_symplectic_orthogonal(rng, m));
    CHECK(split_defect(s) <= 1e-12 * static_cast<double>(m));
  }
  CHECK_THROWS_AS(split_from_symplectic(mat({{2, 0}, {0, 0.5}})), ValidationError);
}

TEST_CASE("vacuum augmentation") {
  const auto cav = two_port_cavity(1.0, 0.5);
  const auto aug = augment_with_vacuum(cav, 2);
  CHECK(aug.channel_count() == 4);
  CHECK(max_abs(aug.C().bottomRows(4)) == 0.0);
  CHECK(max_abs(aug.drift() - cav.drift()) == 0.0);
  CHECK(aug.channels()[2].role == ChannelRole::kEnvironment);
  const auto same = augment_with_vacuum(cav, 0);
  CHECK(max_abs(same.C() - cav.C()) == 0.0);
  CHECK(same.channel_count() == 2);
}

TEST_CASE("complex description of a lossy cavity") {
  const double kappa = 0.7;
  CMatrix d(1, 1);
  d(0, 0) = -kappa;
  CVector k(1);
  k(0) = std::sqrt(2 * kappa);
  const auto sys = complex_to_quadrature(d, {k});
  CHECK(max_abs(sys.drift() + kappa * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(sys.C() - std::sqrt(2 * kappa) * Matrix::Identity(2, 2)) < 1e-15);

  const auto zero = complex_to_quadrature(CMatrix::Zero(2, 2), {CVector::Zero(2)});
  CHECK(max_abs(zero.drift()) == 0.0);
  CHECK(max_abs(zero.C()) == 0.0);
}

TEST_CASE("complex description rejects a non-realizable drift") {
  CMatrix d(1, 1);
  d(0, 0) = -1.0;
  CHECK_THROWS_AS(complex_to_quadrature(d, {CVector::Zero(1)}), ValidationError);
}

TEST_CASE("memory drift isolates the spin wave when detuning and coupling vanish") {
  const auto sys = lambda_memory(1.0, 0.0, 0.0);
  const Matrix& a = sys.drift();
  CHECK(max_abs(a.block(4, 0, 2, 4)) == 0.0);
  CHECK(max_abs(a.block(0, 4, 4, 2)) == 0.0);
  CHECK(max_abs(sys.C().rightCols(2)) == 0.0);
}

TEST_CASE("complex round trip") {
  std::mt19937_64 rng(3);
  for (Index n = 1; n <= 3; ++n) {
    const CMatrix h0 = oracle::gaussian(rng, n, n).cast<Complex>() +
                       Complex(0, 1) * oracle::gaussian(rng, n, n).cast<Complex>();
    const CMatrix h = (h0 + h0.adjoint()) / 2.0;
    CVector k(n);
    for (Index i = 0; i < n; ++i) k(i) = Complex(oracle::gaussian(rng, 1, 1)(0), oracle::gaussian(rng, 1, 1)(0));
    const CMatrix drift = -Complex(0, 1) * h - 0.5 * k.conjugate() * k.transpose();
    const auto sys = complex_to_quadrature(drift, {k});
    const auto back = quadrature_to_complex(sys);
    CHECK((back.drift - drift).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.couplings[0] - k).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("state-space ports of a measured system") {
  const auto sys = optomech_reduced(1, 1, 2);
  const auto meas = default_measurement(sys);
  REQUIRE(meas.has_value());
  CHECK(max_abs(meas->split.M1 - mat({{0, 1}})) < 1e-15);
  const auto ss = to_state_space(sys, meas);
  for (const char* p : {"W", "W1", "F", "Q", "P"}) CHECK(ss.has_input(p));
  for (const char* p : {"Wout", "W1out", "y"}) CHECK(ss.has_output(p));
  CHECK(max_abs(ss.C({"y"}) - meas->split.M1 * sys.C()) < 1e-15);
  CHECK(max_abs(ss.B({"Q"}) - sys.noise_input() * meas->split.M1.transpose()) < 1e-15);
  CHECK(max_abs(ss.B({"P"}) - sys.noise_input() * meas->split.M2.transpose()) < 1e-15);
  CHECK(max_abs(ss.D({"y"}, {"Q"}) - Matrix::Identity(1, 1)) == 0.0);
  CHECK(max_abs(ss.D({"y"}, {"P"})) == 0.0);
  CHECK_THROWS_AS((void)ss.input("nope"), LookupError);
}

TEST_CASE("realizability of random systems") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + t % 4, m = 1 + t % 3;
    const auto sys = oracle::random_system(rng, n, m);
    const Matrix s = oracle::sigma(n);
    const Matrix x = s.transpose() * sys.drift() -
                     sys.C().transpose() * oracle::sigma(m) * sys.C() / 2.0;
    const double scale = std::max(1.0, max_abs(sys.G()));
    CHECK(max_abs(x - x.transpose()) <= 1e-12 * scale);
    CHECK(sys.realizability_defect() <= 1e-12 * scale);
  }
}

}  // TEST_SUITE
