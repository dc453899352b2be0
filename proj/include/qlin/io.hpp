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

#include <string>

#include <json.hpp>

#include "qlin/core_model.hpp"
#include "qlin/goals.hpp"
#include "qlin/interconnect.hpp"
#include "qlin/nogo.hpp"
#include "qlin/state_space.hpp"

namespace qlin::io {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
/// `cols` resolves the width of an empty row list.
Matrix matrix_from_json(const Json& j, const std::string& what, Index cols = 0);
Vector vector_from_json(const Json& j, const std::string& what);

/// {"modes", "G", "C", "channels": [{"label", "role", "measure"?}], "force"?, "mode_labels"}
Json to_json(const QuantumLinearSystem& sys);
QuantumLinearSystem system_from_json(const Json& j);

/// {"kind": "state_space", "A", "inputs": [{"name", "B"}], "outputs": [{"name", "C"}],
///  "feedthrough": [{"output", "input", "D"}]}
Json to_json(const StateSpaceModel& model);
StateSpaceModel state_space_from_json(const Json& j);

enum class ControllerScheme { kMF1, kMF2, kCF1, kCF2, kDirect };
std::string to_string(ControllerScheme s);
ControllerScheme parse_controller_scheme(const std::string& s);

/// Controller description. The "scheme" key selects which fields apply:
///   mf1:    A_K, B_K, C_K, angles (one per channel)
///   mf2:    A_K, B_K, C_K, feedback_angles, evaluation_angles
///   cf1:    G_K, C1, C2, mode_labels?
///   cf2:    G_K, C_K, S, mode_labels?
///   direct: tau, gain, modulation
struct ControllerSpec {
  ControllerScheme scheme = ControllerScheme::kMF1;
  ClassicalController classical;
  QuantumController quantum;
  std::vector<double> angles;
  std::vector<double> evaluation_angles;
  double tau = 0.0;
  double gain = 0.0;
  Vector modulation;
};

ControllerSpec controller_from_json(const Json& j);
Json to_json(const ControllerSpec& spec);

Json to_json(const GoalVerdict& v);
Json to_json(const NogoReport& r);
Json to_json(const Subspace& s);

/// Reads and parses a UTF-8 JSON file; ValidationError on I/O or syntax errors.
Json read_json_file(const std::string& path);

/// %.17g formatting.
std::string format_double(double x);

}  // namespace qlin::io
