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

#include "qlin/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "qlin/errors.hpp"

namespace qlin {
namespace {

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols, double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = nd(rng) * scale;
  return m;
}

MeasurementSplit designed_split(const QuantumLinearSystem& plant, const std::vector<Index>& chans) {
  std::vector<double> angles;
  for (Index j : chans) angles.push_back(plant.channels()[j].homodyne_angle.value_or(0.0));
  return homodyne_split(angles);
}

std::vector<Index> all_channels(const QuantumLinearSystem& plant) {
  std::vector<Index> v(static_cast<std::size_t>(plant.channel_count()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<Index>(i);
  return v;
}

Index feedback_width(const QuantumLinearSystem& plant, FeedbackScheme scheme) {
  return scheme == FeedbackScheme::kMF1
             ? plant.channel_count()
             : static_cast<Index>(plant.channels_with_role(ChannelRole::kFeedback).size());
}

struct TrialOutcome {
  bool skipped = false;
  bool violation = false;
  bool inconsistent = false;
  double residual = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
};

}  // namespace

std::string to_string(FeedbackScheme s) { return s == FeedbackScheme::kMF1 ? "mf1" : "mf2"; }

FeedbackScheme parse_scheme(const std::string& s) {
  if (s == "mf1") return FeedbackScheme::kMF1;
  if (s == "mf2") return FeedbackScheme::kMF2;
  throw ValidationError("unknown feedback scheme '" + s + "' (expected mf1 or mf2)");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MeasurementSplit random_split(std::mt19937_64& rng, Index m) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix z(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) z(i, j) = Complex(nd(rng), nd(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < m; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;  // Haar phase correction
  }
  return split_from_symplectic(real_rep(q));
}

ClassicalController sample_classical_controller(std::mt19937_64& rng, Index inputs,
                                                Index outputs, Index min_dim, Index max_dim) {
  if (min_dim < 0 || max_dim < min_dim) throw DomainError("invalid controller dimension range");
  std::uniform_int_distribution<Index> dim_dist(min_dim, max_dim);
  const Index d = dim_dist(rng);
  if (d == 0) return ClassicalController::zero(0, inputs, outputs);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ClassicalController k;
  k.A_K = gaussian(rng, d, d, scale);
  k.B_K = gaussian(rng, d, inputs, scale);
  k.C_K = gaussian(rng, outputs, d, scale);
  const double top = Eigen::EigenSolver<Matrix>(k.A_K, false).eigenvalues().real().maxCoeff();
  if (top > -0.5) k.A_K -= (top + 0.5) * Matrix::Identity(d, d);
  return k;
}

ControllerSample sample_trial(std::mt19937_64& rng, const QuantumLinearSystem& plant,
                              FeedbackScheme scheme, Index max_dim) {
  const Index m = plant.channel_count();
  ControllerSample s;
  if (scheme == FeedbackScheme::kMF1) {
    s.split = random_split(rng, m);
  } else {
    s.split = random_split(rng, feedback_width(plant, scheme));
    s.evaluation_split =
        random_split(rng, static_cast<Index>(plant.channels_with_role(ChannelRole::kEvaluation).size()));
  }
  s.controller = sample_classical_controller(rng, s.split.m, 2 * m, 0, max_dim);
  return s;
}

StateSpaceModel feedback_loop(const QuantumLinearSystem& plant, FeedbackScheme scheme,
                              const ControllerSample& sample) {
  return scheme == FeedbackScheme::kMF1
             ? mf_type1(plant, sample.controller, sample.split)
             : mf_type2(plant, sample.controller, sample.split, sample.evaluation_split);
}

GoalVerdict check_goal(const StateSpaceModel& loop, Goal goal, FeedbackScheme scheme,
                       Index plant_states, bool plant_block, const GoalOptions& opts) {
  std::optional<Subspace> r;
  if (plant_block) r = Subspace::coordinate_block(loop.states(), 0, plant_states);
  switch (goal) {
    case Goal::kBAE:
      return check_bae(loop, {"P"}, {scheme == FeedbackScheme::kMF1 ? "y" : "z"}, opts);
    case Goal::kQND:
      return find_qnd(loop, {"W"},
                      scheme == FeedbackScheme::kMF1 ? PortList{"y"} : PortList{"y", "z"}, r,
                      opts);
    case Goal::kDFS:
      return find_dfs(loop, {"W"}, {"Wout"}, r, opts);
  }
  throw Error("unreachable goal");
}

NogoReport verify_nogo(const QuantumLinearSystem& plant, const std::string& plant_id, Goal goal,
                       FeedbackScheme scheme, Index trials, std::uint64_t seed,
                       const NogoOptions& opts) {
  if (trials < 0) throw DomainError("trial count must be non-negative");
  const Index n2 = 2 * plant.modes();
  const Index m = plant.channel_count();
  const Index max_dim = opts.max_controller_dim < 0 ? n2 + 2 : opts.max_controller_dim;

  // Hypothesis under the plant's designed measurement.
  ControllerSample designed;
  if (scheme == FeedbackScheme::kMF1) {
    designed.split = designed_split(plant, all_channels(plant));
  } else {
    const auto fb = plant.channels_with_role(ChannelRole::kFeedback);
    const auto ev = plant.channels_with_role(ChannelRole::kEvaluation);
    if (fb.empty() || ev.empty())
      throw ValidationError("type-2 feedback needs feedback and evaluation channels");
    designed.split = designed_split(plant, fb);
    designed.evaluation_split = designed_split(plant, ev);
  }
  designed.controller = ClassicalController::zero(0, designed.split.m, 2 * m);
  const GoalVerdict base = check_goal(feedback_loop(plant, scheme, designed), goal, scheme, n2,
                                      true, opts.goal_options);
  if (base.achieved)
    throw PreconditionError("plant '" + plant_id + "' already achieves " + to_string(goal) +
                            "; the no-go hypothesis does not hold");

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  auto run = [&](Index i) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(i)));
    ControllerSample s = sample_trial(rng, plant, scheme, max_dim);
    TrialOutcome& o = outcomes[static_cast<std::size_t>(i)];
    ControllerSample bare = s;
    bare.controller = ClassicalController::zero(0, s.split.m, 2 * m);
    const GoalVerdict pv = check_goal(feedback_loop(plant, scheme, bare), goal, scheme, n2, true,
                                      opts.goal_options);
    if (pv.achieved) {
      o.skipped = true;
      return;
    }
    const GoalVerdict cv = check_goal(feedback_loop(plant, scheme, s), goal, scheme, n2, true,
                                      opts.goal_options);
    o.violation = cv.achieved;
    o.inconsistent = !cv.method_agreement || !pv.method_agreement;
    o.residual = cv.residual;
    o.tolerance = cv.tolerance;
  };

  unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<Index>(workers, std::max<Index>(trials, 1)));
  if (workers <= 1) {
    for (Index i = 0; i < trials; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (Index i = t; i < trials; i += workers) run(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  NogoReport rep;
  rep.goal = goal;
  rep.scheme = scheme;
  rep.plant_id = plant_id;
  rep.seed = seed;
  rep.trials = trials;
  rep.max_controller_dim = max_dim;
  rep.worst_residual_gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < trials; ++i) {
    const TrialOutcome& o = outcomes[static_cast<std::size_t>(i)];
    if (o.skipped) {
      ++rep.skipped;
      continue;
    }
    if (o.violation) {
      ++rep.violations;
      if (rep.first_violation < 0) rep.first_violation = i;
    }
    if (o.inconsistent) ++rep.inconsistent;
    if (!o.violation && o.residual <= 10 * o.tolerance) ++rep.near_misses;
    rep.worst_residual_gap = std::min(rep.worst_residual_gap, o.residual);
  }
  return rep;
}

}  // namespace qlin
