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
#include <optional>
#include <string>
#include <vector>

#include "qlin/state_space.hpp"
#include "qlin/structural.hpp"

namespace qlin {

enum class Goal { kBAE, kQND, kDFS };

std::string to_string(Goal goal);
Goal parse_goal(const std::string& s);

struct GoalOptions {
  /// Markov verdict threshold relative to |B| |C|.
  double rel_tolerance = 1e-9;
  /// Largest cosine between controllable and observable bases (BAE), and
  /// principal-angle tolerance for subspace intersections.
  double geometric_tolerance = 1e-8;
  /// Relative threshold for growing Krylov bases.
  double krylov_tolerance = 1e-10;
  /// Relative singular-value threshold for the stacked Markov kernels.
  double kernel_tolerance = 1e-11;
};

struct GoalVerdict {
  Goal goal = Goal::kBAE;
  bool achieved = false;
  /// Unit vectors, sign fixed by first nonzero entry positive. Empty for BAE.
  std::vector<Vector> witnesses;
  /// BAE: largest |Markov entry| (normalized drift). QND/DFS: how far the
  /// witnesses are from exact, or the smallest singular value of the
  /// defining stack when no witness exists.
  double residual = 0.0;
  double tolerance = 0.0;
  bool method_agreement = true;

  bool geometric_achieved = false;
  bool markov_achieved = false;
  Index geometric_dim = 0;
  Index markov_dim = 0;

  Subspace witness_space(Index ambient) const;
};

/// Zero transfer from the back-action ports to the measured outputs.
GoalVerdict check_bae(const StateSpaceModel& model, const PortList& ba_ports,
                      const PortList& outputs, const GoalOptions& opts = {});

/// Variables uncontrollable from every noise port yet visible in `outputs`.
GoalVerdict find_qnd(const StateSpaceModel& model, const PortList& noise_ports,
                     const PortList& outputs,
                     const std::optional<Subspace>& restrict_to = std::nullopt,
                     const GoalOptions& opts = {});

/// Variables uncontrollable from every noise port and unobservable in every
/// output field.
GoalVerdict find_dfs(const StateSpaceModel& model, const PortList& noise_ports,
                     const PortList& output_fields,
                     const std::optional<Subspace>& restrict_to = std::nullopt,
                     const GoalOptions& opts = {});

struct TransferZeroCheck {
  bool markov_zero = false;
  bool transfer_zero = false;
  double markov_residual = 0.0;
  double markov_tolerance = 0.0;
  double max_gain = 0.0;  // largest |Xi(s) - D| over the probe points
  double gain_tolerance = 0.0;
  bool agree() const { return markov_zero == transfer_zero; }
};

/// Compares the Markov-parameter zero test with probing the strictly proper
/// part of the transfer function at 16 points on |s| = 2|A| + 1.
TransferZeroCheck transfer_zero_check(const StateSpaceModel& model, const PortList& inputs,
                                      const PortList& outputs, const GoalOptions& opts = {},
                                      std::uint64_t seed = 0x5eedULL);
bool transfer_zero_equivalence(const StateSpaceModel& model, const PortList& inputs,
                               const PortList& outputs, const GoalOptions& opts = {});

/// Unit norm, first entry above 1e-12 made positive.
Vector canonical_witness(const Vector& v);

}  // namespace qlin
