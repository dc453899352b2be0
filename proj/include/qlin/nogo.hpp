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

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qlin/core_model.hpp"
#include "qlin/goals.hpp"
#include "qlin/interconnect.hpp"

namespace qlin {

enum class FeedbackScheme { kMF1, kMF2 };

std::string to_string(FeedbackScheme s);
FeedbackScheme parse_scheme(const std::string& s);

/// Haar-random orthogonal symplectic split on m channels.
MeasurementSplit random_split(std::mt19937_64& rng, Index m);

/// Controller with a uniformly drawn state dimension in [min_dim, max_dim].
/// A_K is shifted so every eigenvalue has real part <= -0.5; B_K and C_K
/// are i.i.d. N(0, 1) / sqrt(dim).
ClassicalController sample_classical_controller(std::mt19937_64& rng, Index inputs,
                                                Index outputs, Index min_dim, Index max_dim);

struct ControllerSample {
  ClassicalController controller;
  MeasurementSplit split;             // type-1: all channels; type-2: feedback channels
  MeasurementSplit evaluation_split;  // type-2 only
};

/// One trial's draw for the plant and scheme.
ControllerSample sample_trial(std::mt19937_64& rng, const QuantumLinearSystem& plant,
                              FeedbackScheme scheme, Index max_dim);

/// Realization used by the checks: the closed loop, or the bare plant when
/// the controller has no states and zero gains.
StateSpaceModel feedback_loop(const QuantumLinearSystem& plant, FeedbackScheme scheme,
                              const ControllerSample& sample);

/// Goal check on a loop built by feedback_loop. QND and DFS are restricted
/// to the plant quadratures when `plant_block` is set.
GoalVerdict check_goal(const StateSpaceModel& loop, Goal goal, FeedbackScheme scheme,
                       Index plant_states, bool plant_block, const GoalOptions& opts = {});

struct NogoOptions {
  /// Largest controller dimension; negative selects 2n + 2.
  Index max_controller_dim = -1;
  /// Worker threads; 0 selects the hardware concurrency.
  unsigned threads = 0;
  GoalOptions goal_options;
};

struct NogoReport {
  Goal goal = Goal::kBAE;
  FeedbackScheme scheme = FeedbackScheme::kMF1;
  std::string plant_id;
  std::uint64_t seed = 0;
  Index trials = 0;
  /// Trials whose random split already let the bare plant reach the goal.
  Index skipped = 0;
  Index violations = 0;
  /// Trials where the geometric and Markov routes disagreed.
  Index inconsistent = 0;
  /// Closed-loop residuals within ten times the tolerance.
  Index near_misses = 0;
  /// Smallest closed-loop residual over the evaluated trials.
  double worst_residual_gap = 0.0;
  Index max_controller_dim = 0;
  /// First violating trial index, or -1.
  Index first_violation = -1;
};

/// Samples controllers and checks that none reaches a goal the bare plant
/// misses. Throws PreconditionError when the plant already reaches the goal
/// under its default measurement.
NogoReport verify_nogo(const QuantumLinearSystem& plant, const std::string& plant_id, Goal goal,
                       FeedbackScheme scheme, Index trials, std::uint64_t seed,
                       const NogoOptions& opts = {});

/// splitmix64 step used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qlin
