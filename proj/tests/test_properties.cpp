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

#include <algorithm>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qlin/core_model.hpp"
#include "qlin/goals.hpp"
#include "qlin/interconnect.hpp"
#include "qlin/structural.hpp"

using namespace qlin;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Measurement random_measurement(std::mt19937_64& rng, const QuantumLinearSystem& sys) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  Measurement meas;
  std::vector<double> angles;
  for (Index j = 0; j < sys.channel_count(); ++j) {
    meas.channels.push_back(j);
    angles.push_back(u(rng));
  }
  meas.split = homodyne_split(angles);
  return meas;
}

QuantumController random_quantum_controller(std::mt19937_64& rng, Index k, Index m) {
  QuantumController q;
  Matrix g = oracle::gaussian(rng, 2 * k, 2 * k);
  q.G_K = (g + g.transpose()) / 2.0;
  q.C1 = oracle::gaussian(rng, 2 * m, 2 * k);
  q.C2 = oracle::gaussian(rng, 2 * m, 2 * k);
  q.C_K = oracle::gaussian(rng, 2 * m, 2 * k);
  q.S = oracle::random_symplectic_orthogonal(rng, m);
  return q;
}

Subspace span(const Matrix& m) { return range(m); }

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("random systems and coherent loops are physically realizable") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 1 + trial % 4, m = 1 + (trial / 4) % 3, k = 1 + trial % 2;
    const auto plant = oracle::random_system(rng, n, m, 0, trial % 2 == 0, trial % 3 == 0);
    CHECK(plant.realizability_defect() < 1e-10);
    const auto q = random_quantum_controller(rng, k, m);
    CHECK(cf_type1(plant, q).realizability_defect() < 1e-10);
    if (m == 2) {
      const auto paired = build_system(plant.G(), plant.C(),
                                       {{"W1", ChannelRole::kFeedback, std::nullopt},
                                        {"W2", ChannelRole::kEvaluation, std::nullopt}},
                                       plant.force());
      CHECK(cf_type2(paired, random_quantum_controller(rng, k, 1)).realizability_defect() < 1e-10);
    }
  }
}

TEST_CASE("homodyne splits satisfy the symplectic identities for every width") {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(-10, 10);
  for (Index m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> angles;
      for (Index j = 0; j < m; ++j) angles.push_back(u(rng));
      CHECK(homodyne_split(angles).defect() <= 1e-12 * static_cast<double>(m));
    }
    CHECK(split_from_symplectic(oracle::random_symplectic_orthogonal(rng, m)).defect() <=
          1e-12 * static_cast<double>(m));
  }
}

TEST_CASE("controllable dimension is invariant under similarity") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 4;
    const auto sys = oracle::random_system(rng, n, 1 + trial % 2, trial % n);
    const auto model = to_state_space(sys, std::nullopt);
    Matrix t = oracle::gaussian(rng, 2 * n, 2 * n) + 3.0 * Matrix::Identity(2 * n, 2 * n);
    const auto moved = model.transformed(t);
    const Index r = controllable_subspace(model, {"W"}).rank();
    CHECK(controllable_subspace(moved, {"W"}).rank() == r);
    CHECK(r == oracle::rank(oracle::ctrb(model.A(), model.B({"W"}))));
    CHECK(observable_subspace(moved, {"Wout"}).rank() == observable_subspace(model, {"Wout"}).rank());
  }
}

TEST_CASE("kernel of the transposed controllability matrix complements its range") {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 4;
    const auto model = to_state_space(oracle::random_system(rng, n, 1, trial % n, true), std::nullopt);
    const Matrix c = controllability_matrix(model, {"W"});
    const Subspace ran = range(c), ker = kernel(c.transpose());
    CHECK(ran.rank() + ker.rank() == 2 * n);
    if (!ran.empty() && !ker.empty()) CHECK(max_abs(ker.basis.transpose() * ran.basis) < 1e-8);
  }
}

TEST_CASE("Kalman decomposition has the structural zero pattern") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 3;
    const auto model = to_state_space(oracle::random_system(rng, n, 1, 1 + trial % (n - 1), false, true),
                                      std::nullopt);
    for (auto kind : {DecompositionKind::kControllable, DecompositionKind::kObservable}) {
      const PortList ports = kind == DecompositionKind::kControllable ? PortList{"W"} : PortList{"Wout"};
      const auto k = kalman_decompose(model, ports, kind);
      CHECK(k.primary_dim + k.residual_dim == 2 * n);
      CHECK(max_abs(k.T.transpose() * k.T - Matrix::Identity(2 * n, 2 * n)) < 1e-12);
      CHECK(k.structural_defect(ports) < 1e-10);
    }
  }
}

TEST_CASE("Markov parameters are invariant under similarity") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 3;
    const auto sys = oracle::random_system(rng, n, 1);
    const auto model = to_state_space(sys, random_measurement(rng, sys));
    const Matrix t = oracle::gaussian(rng, 2 * n, 2 * n) + 4.0 * Matrix::Identity(2 * n, 2 * n);
    const auto a = markov_parameters(model, {"W"}, {"y"});
    const auto b = markov_parameters(model.transformed(t), {"W"}, {"y"});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(max_abs(a[i] - b[i]) <= 1e-8 * std::max(1.0, max_abs(a[i])));
    const auto ref = oracle::markov(model.A(), model.B({"W"}), model.C({"y"}), static_cast<Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(max_abs(a[i] - ref[i]) <= 1e-10 * std::max(1.0, max_abs(ref[i])));
  }
}

TEST_CASE("intersection is commutative and monotone") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 5;
    const Index shared = trial % 3;
    const Matrix common = oracle::gaussian(rng, n, shared);
    const Index ra = std::min<Index>(n, shared + trial % 2 + 1), rb = std::min<Index>(n, shared + 1);
    Matrix a(n, ra), b(n, rb);
    a << common, oracle::gaussian(rng, n, ra - shared);
    b << common, oracle::gaussian(rng, n, rb - shared);
    const Subspace sa = span(a), sb = span(b);
    const Subspace ab = intersect(sa, sb), ba = intersect(sb, sa);
    CHECK(ab.rank() == ba.rank());
    CHECK(ab.rank() == oracle::intersection_dim(a, b));
    if (!ab.empty()) CHECK(subspace_distance(ab, ba) < 1e-8);
    const Matrix wider_basis = (Matrix(n, ra + 1) << a, oracle::gaussian(rng, n, 1)).finished();
    CHECK(intersect(span(wider_basis), sb).rank() >= ab.rank());
    for (Index j = 0; j < ab.rank(); ++j) {
      CHECK(sa.contains(ab.basis.col(j)));
      CHECK(sb.contains(ab.basis.col(j)));
    }
  }
}

TEST_CASE("geometric and Markov goal verdicts agree on random systems") {
  std::mt19937_64 rng(108);
  int bae = 0, qnd = 0, dfs = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + trial % 4, m = 1 + (trial / 4) % 3;
    const Index decoupled = (trial % 5 == 0) ? n : trial % n;
    const auto sys = oracle::random_system(rng, n, m, decoupled, trial % 3 == 1, trial % 2 == 1);
    const auto model = to_state_space(sys, random_measurement(rng, sys));
    const auto vb = check_bae(model, {"P"}, {"y"});
    const auto vq = find_qnd(model, {"W"}, {"y"});
    const auto vd = find_dfs(model, {"W"}, {"Wout"});
    CHECK(vb.method_agreement);
    CHECK(vq.method_agreement);
    CHECK(vd.method_agreement);
    if (decoupled > 0) {
      CHECK(vd.achieved);
      CHECK(static_cast<Index>(vd.witnesses.size()) >= 2 * decoupled);
    }
    bae += vb.achieved;
    qnd += vq.achieved;
    dfs += vd.achieved;
  }
  CHECK(dfs > 0);
  MESSAGE("achieved counts: bae=" << bae << " qnd=" << qnd << " dfs=" << dfs);
}

}  // TEST_SUITE
