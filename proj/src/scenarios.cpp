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

#include "qlin/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "qlin/errors.hpp"

namespace qlin {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void require_positive(double v, const char* name) {
  if (!(v > 0)) throw DomainError(std::string(name) + " must be positive");
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0)) throw DomainError(std::string(name) + " must be non-negative");
}

double param(const ScenarioParams& p, const std::string& key) { return p.at(key); }

}  // namespace

void MichelsonParams::validate() const {
  require_positive(m, "m");
  require_positive(omega, "omega");
  require_positive(lambda, "lambda");
  require_positive(L, "L");
}

QuantumLinearSystem two_port_cavity(double kappa1, double kappa2) {
  require_non_negative(kappa1, "kappa1");
  require_non_negative(kappa2, "kappa2");
  Matrix c = Matrix::Zero(4, 2);
  c.topRows(2) = std::sqrt(2 * kappa1) * Matrix::Identity(2, 2);
  c.bottomRows(2) = std::sqrt(2 * kappa2) * Matrix::Identity(2, 2);
  return build_system(Matrix::Zero(2, 2), c,
                      {{"W1", ChannelRole::kFeedback, std::nullopt},
                       {"W2", ChannelRole::kEvaluation, std::nullopt}},
                      std::nullopt, {"cavity"});
}

QuantumLinearSystem optomech_reduced(double m, double omega, double lambda) {
  require_positive(m, "m");
  require_non_negative(omega, "omega");
  require_non_negative(lambda, "lambda");
  const Matrix g = mat({{m * omega * omega, 0}, {0, 1 / m}});
  const Matrix c = std::sqrt(lambda) * mat({{0, 0}, {1, 0}});
  return build_system(g, c, {{"W1", ChannelRole::kEvaluation, kHalfPi}}, vec({0, 1}),
                      {"oscillator"});
}

QuantumLinearSystem optomech_full(double m, double omega, double kappa, double gamma) {
  require_positive(m, "m");
  require_non_negative(omega, "omega");
  require_non_negative(gamma, "gamma");
  const Matrix a = mat({{0, 1 / m, 0, 0},
                        {-m * omega * omega, 0, kappa, 0},
                        {0, 0, -gamma, 0},
                        {kappa, 0, 0, -gamma}});
  const Matrix c = std::sqrt(2 * gamma) * mat({{0, 0, 1, 0}, {0, 0, 0, 1}});
  const Matrix g = sigma(2).transpose() * a - c.transpose() * sigma(1) * c / 2.0;
  return build_system(g, c, {{"W1", ChannelRole::kEvaluation, kHalfPi}}, vec({0, 1, 0, 0}),
                      {"oscillator", "cavity"});
}

QuantumLinearSystem michelson(const MichelsonParams& p) {
  p.validate();
  const double k = p.m * p.omega * p.omega;
  const Matrix g = Vector(vec({k, 1 / p.m, k, 1 / p.m})).asDiagonal();
  const double s = std::sqrt(p.lambda);
  const Matrix c = s * mat({{0, 0, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 0}, {1, 0, -1, 0}});
  return build_system(g, c,
                      {{"W1", ChannelRole::kFeedback, std::nullopt},
                       {"W2", ChannelRole::kEvaluation, kHalfPi}},
                      vec({0, 1, 0, -1}), {"mirror1", "mirror2"});
}

QuantumLinearSystem atomic_ensemble_linear(double mu) {
  require_non_negative(mu, "mu");
  const Matrix c = mat({{0, std::sqrt(mu)}, {0, 0}});
  return build_system(Matrix::Zero(2, 2), c, {{"W1", ChannelRole::kEvaluation, 0.0}},
                      std::nullopt, {"spin"});
}

QuantumLinearSystem squeezing_cavity(double kappa) {
  require_non_negative(kappa, "kappa");
  const Matrix g = mat({{0, -kappa / 2}, {-kappa / 2, 0}});
  const Matrix c = std::sqrt(kappa) * Matrix::Identity(2, 2);
  return build_system(g, c, {{"W1", ChannelRole::kFeedback, 0.0}}, std::nullopt, {"cavity"});
}

QuantumLinearSystem lambda_memory(double kappa, double delta, double g, double omega_rabi) {
  require_non_negative(kappa, "kappa");
  if (omega_rabi != 0.0)
    throw PreconditionError("only the storage stage (omega_rabi = 0) is time invariant");
  const Complex i(0.0, 1.0);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = -kappa;
  d(0, 1) = i * g;
  d(1, 0) = i * g;
  d(1, 1) = -i * delta;
  d(1, 2) = i * omega_rabi;
  d(2, 1) = i * omega_rabi;
  CVector k = CVector::Zero(3);
  k(0) = std::sqrt(2 * kappa);
  const QuantumLinearSystem raw = complex_to_quadrature(d, {k});
  return build_system(raw.G(), raw.C(), {{"A", ChannelRole::kEnvironment, std::nullopt}},
                      std::nullopt, {"cavity", "polarization", "spin_wave"});
}

QuantumController tsang_caves_controller(double m, double omega, double kappa, double gamma,
                                         std::optional<double> g) {
  require_positive(m, "m");
  require_positive(omega, "omega");
  require_positive(gamma, "gamma");
  const double gg = g.value_or(kappa / std::sqrt(m * omega));
  QuantumController k;
  k.G_K = mat({{-omega, 0}, {0, -omega}});
  // Sign chosen so the closed-loop drift couples q2 into p3 with +g.
  k.C1 = -(gg / std::sqrt(2 * gamma)) * mat({{0, 0}, {1, 0}});
  k.C2 = -k.C1;
  k.mode_labels = {"controller"};
  return k;
}

MichelsonCfParams michelson_cf_params(const MichelsonParams& p) {
  p.validate();
  const double w2 = p.omega * p.omega;
  const double lm = p.lambda / p.m;
  MichelsonCfParams out;
  out.epsilon = std::sqrt(2.0) * p.lambda / (p.m * std::sqrt(w2 + std::sqrt(w2 * w2 + 4 * lm * lm)));
  out.alpha = -p.lambda / (p.m * out.epsilon);
  return out;
}

QuantumController michelson_cf_controller(const MichelsonParams& p) {
  const MichelsonCfParams cf = michelson_cf_params(p);
  QuantumController k;
  k.G_K = mat({{cf.alpha, 0}, {0, cf.alpha}});
  k.C_K = std::sqrt(2 * cf.epsilon) * Matrix::Identity(2, 2);
  k.S = mat({{0, 1}, {-1, 0}});
  k.mode_labels = {"controller"};
  return k;
}

QuantumController mirror_dfs_controller(const QuantumLinearSystem& plant) {
  QuantumController k;
  k.G_K = plant.G();
  k.C1 = plant.C() / 2.0;
  k.C2 = plant.C() / 2.0;
  for (const auto& l : plant.mode_labels()) k.mode_labels.push_back(l + "_mirror");
  return k;
}

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> reg = [] {
    std::vector<ScenarioInfo> r;
    r.push_back({"two_port_cavity", "empty two-port cavity", {{"kappa1", 1.0}, {"kappa2", 1.0}},
                 [](const ScenarioParams& p) {
                   return two_port_cavity(param(p, "kappa1"), param(p, "kappa2"));
                 }});
    r.push_back({"optomech_reduced", "oscillator probed after cavity elimination",
                 {{"m", 1.0}, {"omega", 1.0}, {"lambda", 1.0}},
                 [](const ScenarioParams& p) {
                   return optomech_reduced(param(p, "m"), param(p, "omega"), param(p, "lambda"));
                 }});
    r.push_back({"optomech_full", "oscillator coupled to a leaky cavity",
                 {{"m", 1.0}, {"omega", 1.0}, {"kappa", 1.0}, {"gamma", 2.0}},
                 [](const ScenarioParams& p) {
                   return optomech_full(param(p, "m"), param(p, "omega"), param(p, "kappa"),
                                        param(p, "gamma"));
                 }});
    r.push_back({"michelson", "two-mirror interferometer without control",
                 {{"m", 1.0}, {"omega", 0.01}, {"lambda", 1.0}, {"L", 1.0}},
                 [](const ScenarioParams& p) {
                   return michelson({param(p, "m"), param(p, "omega"), param(p, "lambda"),
                                     param(p, "L")});
                 }});
    r.push_back({"atomic_ensemble", "linearized spin ensemble", {{"mu", 1.0}},
                 [](const ScenarioParams& p) { return atomic_ensemble_linear(param(p, "mu")); }});
    r.push_back({"squeezing_cavity", "degenerate parametric cavity with amplitude readout",
                 {{"kappa", 1.0}},
                 [](const ScenarioParams& p) { return squeezing_cavity(param(p, "kappa")); }});
    r.push_back({"lambda_memory", "cavity quantum memory in the storage stage",
                 {{"kappa", 1.0}, {"delta", 0.5}, {"g", 1.0}, {"omega_rabi", 0.0}},
                 [](const ScenarioParams& p) {
                   return lambda_memory(param(p, "kappa"), param(p, "delta"), param(p, "g"),
                                        param(p, "omega_rabi"));
                 }});
    r.push_back({"tsang_caves", "optomechanics with the back-action cancelling controller",
                 {{"m", 1.0}, {"omega", 1.0}, {"kappa", 1.0}, {"gamma", 2.0}},
                 [](const ScenarioParams& p) {
                   const double m = param(p, "m"), w = param(p, "omega"), k = param(p, "kappa"),
                                g = param(p, "gamma");
                   return cf_type1(optomech_full(m, w, k, g), tsang_caves_controller(m, w, k, g));
                 }});
    r.push_back({"michelson_cf", "interferometer with the detuned-cavity feedback controller",
                 {{"m", 1.0}, {"omega", 0.01}, {"lambda", 1.0}, {"L", 1.0}},
                 [](const ScenarioParams& p) {
                   const MichelsonParams mp{param(p, "m"), param(p, "omega"), param(p, "lambda"),
                                            param(p, "L")};
                   return cf_type2(michelson(mp), michelson_cf_controller(mp));
                 }});
    r.push_back({"cavity_dfs", "two-port cavity with a mirrored controller",
                 {{"kappa1", 1.0}, {"kappa2", 1.0}},
                 [](const ScenarioParams& p) {
                   const auto plant = two_port_cavity(param(p, "kappa1"), param(p, "kappa2"));
                   return cf_type1(plant, mirror_dfs_controller(plant));
                 }});
    return r;
  }();
  return reg;
}

const ScenarioInfo& find_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return s;
  std::string names;
  for (const auto& s : scenario_registry()) names += (names.empty() ? "" : ", ") + s.name;
  throw LookupError("unknown scenario '" + name + "' (known: " + names + ")");
}

QuantumLinearSystem build_scenario(const std::string& name, const ScenarioParams& overrides) {
  const ScenarioInfo& info = find_scenario(name);
  ScenarioParams p = info.defaults;
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw ValidationError("scenario '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  return info.build(p);
}

}  // namespace qlin
