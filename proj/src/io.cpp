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

#include "qlin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qlin/errors.hpp"

namespace qlin::io {
namespace {

const Json& require(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(ctx + ": missing key '" + key + "'");
  return j.at(key);
}

double finite_number(const Json& x, const std::string& what) {
  if (!x.is_number()) throw ValidationError(what + ": expected a number");
  const double v = x.get<double>();
  if (!std::isfinite(v)) throw ValidationError(what + ": non-finite value");
  return v;
}

std::vector<double> number_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(finite_number(x, what));
  return out;
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw ValidationError(what + ": expected strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

Json measure_to_json(double angle) {
  if (angle == 0.0) return "Q";
  if (angle == std::numbers::pi / 2) return "P";
  return angle;
}

double measure_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "Q" || s == "q") return 0.0;
    if (s == "P" || s == "p") return std::numbers::pi / 2;
    throw ValidationError("channel measure must be Q, P or an angle");
  }
  return finite_number(j, "channel measure");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& what, Index cols) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array of rows");
  const Index r = static_cast<Index>(j.size());
  if (r == 0) return Matrix(0, cols);
  if (!j[0].is_array()) throw ValidationError(what + ": expected an array of rows");
  const Index c = static_cast<Index>(j[0].size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c)
      throw ShapeError(what + ": ragged rows");
    for (Index k = 0; k < c; ++k) m(i, k) = finite_number(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  const auto xs = number_list(j, what);
  Vector v(static_cast<Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Index>(i)) = xs[i];
  return v;
}

Json to_json(const QuantumLinearSystem& sys) {
  Json j;
  j["modes"] = sys.modes();
  j["G"] = to_json(sys.G());
  j["C"] = to_json(sys.C());
  Json chans = Json::array();
  for (const auto& c : sys.channels()) {
    Json cj{{"label", c.label}, {"role", to_string(c.role)}};
    if (c.homodyne_angle) cj["measure"] = measure_to_json(*c.homodyne_angle);
    chans.push_back(std::move(cj));
  }
  j["channels"] = std::move(chans);
  if (sys.force()) j["force"] = to_json(*sys.force());
  j["mode_labels"] = sys.mode_labels();
  return j;
}

QuantumLinearSystem system_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("system description must be a JSON object");
  if (j.contains("kind") && j["kind"] != "system")
    throw ValidationError("expected a quantum system description, got kind '" +
                          j["kind"].dump() + "'");
  const Json& modes = require(j, "modes", "system");
  if (!modes.is_number_integer() || modes.get<long long>() < 0)
    throw ValidationError("system: 'modes' must be a non-negative integer");
  const Index n = modes.get<Index>();
  Matrix g = matrix_from_json(require(j, "G", "system"), "G", 2 * n);
  Matrix c = matrix_from_json(require(j, "C", "system"), "C", 2 * n);
  if (g.rows() != 2 * n) throw ShapeError("G must be " + std::to_string(2 * n) + " x " + std::to_string(2 * n));
  std::vector<Channel> channels;
  if (j.contains("channels")) {
    if (!j["channels"].is_array()) throw ValidationError("system: 'channels' must be an array");
    for (const auto& cj : j["channels"]) {
      Channel ch;
      if (cj.is_string()) {
        ch.label = cj.get<std::string>();
      } else {
        const Json& label = require(cj, "label", "channel");
        if (!label.is_string()) throw ValidationError("channel label must be a string");
        ch.label = label.get<std::string>();
        if (cj.contains("role")) ch.role = parse_channel_role(cj["role"].get<std::string>());
        if (cj.contains("measure") && !cj["measure"].is_null())
          ch.homodyne_angle = measure_from_json(cj["measure"]);
      }
      channels.push_back(std::move(ch));
    }
  }
  std::optional<Vector> force;
  if (j.contains("force") && !j["force"].is_null()) force = vector_from_json(j["force"], "force");
  std::vector<std::string> labels;
  if (j.contains("mode_labels")) labels = string_list(j["mode_labels"], "mode_labels");
  return build_system(std::move(g), std::move(c), std::move(channels), std::move(force),
                      std::move(labels));
}

Json to_json(const StateSpaceModel& model) {
  Json j;
  j["kind"] = "state_space";
  j["states"] = model.states();
  j["A"] = to_json(model.A());
  Json ins = Json::array();
  for (const auto& p : model.inputs()) ins.push_back({{"name", p.name}, {"B", to_json(p.B)}});
  Json outs = Json::array();
  for (const auto& p : model.outputs()) outs.push_back({{"name", p.name}, {"C", to_json(p.C)}});
  Json ft = Json::array();
  for (const auto& [key, d] : model.feedthrough())
    ft.push_back({{"output", key.first}, {"input", key.second}, {"D", to_json(d)}});
  j["inputs"] = std::move(ins);
  j["outputs"] = std::move(outs);
  j["feedthrough"] = std::move(ft);
  return j;
}

StateSpaceModel state_space_from_json(const Json& j) {
  const Matrix a = matrix_from_json(require(j, "A", "state_space"), "A");
  StateSpaceModel m(a);
  for (const auto& p : require(j, "inputs", "state_space")) {
    const Json& b = require(p, "B", "input port");
    m = m.with_input(require(p, "name", "input port").get<std::string>(),
                     matrix_from_json(b, "B", b.empty() ? 0 : static_cast<Index>(b[0].size())));
  }
  for (const auto& p : require(j, "outputs", "state_space"))
    m = m.with_output(require(p, "name", "output port").get<std::string>(),
                      matrix_from_json(require(p, "C", "output port"), "C", a.rows()));
  if (j.contains("feedthrough"))
    for (const auto& f : j["feedthrough"])
      m = m.with_feedthrough(require(f, "output", "feedthrough").get<std::string>(),
                             require(f, "input", "feedthrough").get<std::string>(),
                             matrix_from_json(require(f, "D", "feedthrough"), "D"));
  return m;
}

std::string to_string(ControllerScheme s) {
  switch (s) {
    case ControllerScheme::kMF1: return "mf1";
    case ControllerScheme::kMF2: return "mf2";
    case ControllerScheme::kCF1: return "cf1";
    case ControllerScheme::kCF2: return "cf2";
    case ControllerScheme::kDirect: return "direct";
  }
  return "mf1";
}

ControllerScheme parse_controller_scheme(const std::string& s) {
  if (s == "mf1") return ControllerScheme::kMF1;
  if (s == "mf2") return ControllerScheme::kMF2;
  if (s == "cf1") return ControllerScheme::kCF1;
  if (s == "cf2") return ControllerScheme::kCF2;
  if (s == "direct") return ControllerScheme::kDirect;
  throw ValidationError("unknown controller scheme '" + s + "' (expected mf1, mf2, cf1, cf2 or direct)");
}

ControllerSpec controller_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("controller description must be a JSON object");
  ControllerSpec spec;
  const Json& scheme = require(j, "scheme", "controller");
  if (!scheme.is_string()) throw ValidationError("controller: 'scheme' must be a string");
  spec.scheme = parse_controller_scheme(scheme.get<std::string>());
  switch (spec.scheme) {
    case ControllerScheme::kMF1:
    case ControllerScheme::kMF2: {
      Matrix ak = matrix_from_json(require(j, "A_K", "controller"), "A_K");
      const Index d = ak.rows();
      spec.classical.A_K = ak.cols() == d ? ak : Matrix(d, d);
      if (ak.cols() != d && d != 0) throw ShapeError("A_K must be square");
      spec.classical.B_K = matrix_from_json(require(j, "B_K", "controller"), "B_K");
      spec.classical.C_K = matrix_from_json(require(j, "C_K", "controller"), "C_K", d);
      if (spec.scheme == ControllerScheme::kMF1) {
        if (j.contains("angles")) spec.angles = number_list(j["angles"], "angles");
      } else {
        if (j.contains("feedback_angles")) spec.angles = number_list(j["feedback_angles"], "feedback_angles");
        if (j.contains("evaluation_angles"))
          spec.evaluation_angles = number_list(j["evaluation_angles"], "evaluation_angles");
      }
      break;
    }
    case ControllerScheme::kCF1:
    case ControllerScheme::kCF2: {
      spec.quantum.G_K = matrix_from_json(require(j, "G_K", "controller"), "G_K");
      const Index k = spec.quantum.G_K.rows();
      if (spec.scheme == ControllerScheme::kCF1) {
        spec.quantum.C1 = matrix_from_json(require(j, "C1", "controller"), "C1", k);
        spec.quantum.C2 = matrix_from_json(require(j, "C2", "controller"), "C2", k);
      } else {
        spec.quantum.C_K = matrix_from_json(require(j, "C_K", "controller"), "C_K", k);
        spec.quantum.S = matrix_from_json(require(j, "S", "controller"), "S");
      }
      if (j.contains("mode_labels")) spec.quantum.mode_labels = string_list(j["mode_labels"], "mode_labels");
      break;
    }
    case ControllerScheme::kDirect:
      spec.tau = finite_number(require(j, "tau", "controller"), "tau");
      spec.gain = finite_number(require(j, "gain", "controller"), "gain");
      spec.modulation = vector_from_json(require(j, "modulation", "controller"), "modulation");
      break;
  }
  return spec;
}

Json to_json(const ControllerSpec& spec) {
  Json j;
  j["scheme"] = to_string(spec.scheme);
  switch (spec.scheme) {
    case ControllerScheme::kMF1:
    case ControllerScheme::kMF2:
      j["A_K"] = to_json(spec.classical.A_K);
      j["B_K"] = to_json(spec.classical.B_K);
      j["C_K"] = to_json(spec.classical.C_K);
      if (spec.scheme == ControllerScheme::kMF1) {
        j["angles"] = spec.angles;
      } else {
        j["feedback_angles"] = spec.angles;
        j["evaluation_angles"] = spec.evaluation_angles;
      }
      break;
    case ControllerScheme::kCF1:
    case ControllerScheme::kCF2:
      j["G_K"] = to_json(spec.quantum.G_K);
      if (spec.scheme == ControllerScheme::kCF1) {
        j["C1"] = to_json(spec.quantum.C1);
        j["C2"] = to_json(spec.quantum.C2);
      } else {
        j["C_K"] = to_json(spec.quantum.C_K);
        j["S"] = to_json(spec.quantum.S);
      }
      if (!spec.quantum.mode_labels.empty()) j["mode_labels"] = spec.quantum.mode_labels;
      break;
    case ControllerScheme::kDirect:
      j["tau"] = spec.tau;
      j["gain"] = spec.gain;
      j["modulation"] = to_json(spec.modulation);
      break;
  }
  return j;
}

Json to_json(const GoalVerdict& v) {
  Json w = Json::array();
  for (const auto& x : v.witnesses) w.push_back(to_json(x));
  return {{"goal", to_string(v.goal)},
          {"achieved", v.achieved},
          {"witnesses", std::move(w)},
          {"residual", v.residual},
          {"tolerance", v.tolerance},
          {"method_agreement", v.method_agreement},
          {"geometric", {{"achieved", v.geometric_achieved}, {"dim", v.geometric_dim}}},
          {"markov", {{"achieved", v.markov_achieved}, {"dim", v.markov_dim}}}};
}

Json to_json(const NogoReport& r) {
  Json gap = std::isfinite(r.worst_residual_gap) ? Json(r.worst_residual_gap) : Json(nullptr);
  return {{"goal", to_string(r.goal)},
          {"scheme", to_string(r.scheme)},
          {"plant_id", r.plant_id},
          {"seed", r.seed},
          {"trials", r.trials},
          {"skipped", r.skipped},
          {"violations", r.violations},
          {"inconsistent", r.inconsistent},
          {"near_misses", r.near_misses},
          {"worst_residual_gap", gap},
          {"max_controller_dim", r.max_controller_dim},
          {"first_violation", r.first_violation}};
}

Json to_json(const Subspace& s) {
  Json basis = Json::array();
  for (Index j = 0; j < s.rank(); ++j) basis.push_back(to_json(Vector(s.basis.col(j))));
  return {{"ambient_dim", s.ambient_dim}, {"rank", s.rank()}, {"basis", std::move(basis)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace qlin::io
