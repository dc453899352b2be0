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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlin/core_model.hpp"
#include "qlin/interconnect.hpp"

namespace qlin {

struct MichelsonParams {
  double m = 1.0;
  double omega = 0.01;
  double lambda = 1.0;
  double L = 1.0;

  void validate() const;
};

/// Empty cavity with two ports: A = -(k1 + k2) I. Port W1 is the feedback
/// (locking) port, W2 the evaluation port.
QuantumLinearSystem two_port_cavity(double kappa1, double kappa2);

/// Oscillator with the cavity eliminated; the force kicks p, the output
/// P quadrature carries sqrt(lambda) q and is marked as measured.
QuantumLinearSystem optomech_reduced(double m, double omega, double lambda);

/// Oscillator (q1, p1) coupled with strength kappa to a cavity (q2, p2)
/// that leaks at rate gamma into the probe field; P measured.
QuantumLinearSystem optomech_full(double m, double omega, double kappa, double gamma);

/// Two oscillators with the opposite force on each; W1 is the bright
/// (feedback) port, W2 the dark (evaluation) port with P measured.
QuantumLinearSystem michelson(const MichelsonParams& p);

/// Linearized spin ensemble: dq/dt = sqrt(mu) P, y = sqrt(mu) p + Q.
QuantumLinearSystem atomic_ensemble_linear(double mu);

/// Cavity a1, polarization a2, spin wave a3 in the storage stage.
/// Throws PreconditionError unless omega_rabi = 0.
/// Cavity with a degenerate parametric crystal: drift diag(-kappa, 0), Q measured.
QuantumLinearSystem squeezing_cavity(double kappa);

QuantumLinearSystem lambda_memory(double kappa, double delta, double g, double omega_rabi = 0.0);

/// Single-mode controller that cancels the back-action path of optomech_full.
/// g defaults to kappa / sqrt(m omega).
QuantumController tsang_caves_controller(double m, double omega, double kappa, double gamma,
                                         std::optional<double> g = std::nullopt);

struct MichelsonCfParams {
  double epsilon = 0.0;
  double alpha = 0.0;
};

MichelsonCfParams michelson_cf_params(const MichelsonParams& p);
/// Detuned cavity G_K = diag(alpha, alpha), C_K = sqrt(2 eps) I, S = [[0, 1], [-1, 0]].
QuantumController michelson_cf_controller(const MichelsonParams& p);

/// Controller that duplicates the plant: C1 = C2 = C / 2, G_K = G.
QuantumController mirror_dfs_controller(const QuantumLinearSystem& plant);

using ScenarioParams = std::map<std::string, double>;

struct ScenarioInfo {
  std::string name;
  std::string summary;
  ScenarioParams defaults;
  std::function<QuantumLinearSystem(const ScenarioParams&)> build;
};

const std::vector<ScenarioInfo>& scenario_registry();
/// Throws LookupError listing the known names.
const ScenarioInfo& find_scenario(const std::string& name);
/// Defaults overlaid with `overrides`; unknown keys throw ValidationError.
QuantumLinearSystem build_scenario(const std::string& name, const ScenarioParams& overrides = {});

}  // namespace qlin
