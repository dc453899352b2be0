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

#include "qlin/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qlin/core_model.hpp"
#include "qlin/errors.hpp"
#include "qlin/goals.hpp"
#include "qlin/interconnect.hpp"
#include "qlin/io.hpp"
#include "qlin/nogo.hpp"
#include "qlin/scenarios.hpp"
#include "qlin/structural.hpp"
#include "qlin/xfer.hpp"

#ifndef QLIN_VERSION
#define QLIN_VERSION "0.0.0"
#endif

namespace qlin::cli {
namespace {

using io::Json;

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_bytes(const std::string& bytes, const std::string& path) {
  try {
    return Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

GoalOptions goal_options(std::optional<double> tol) {
  GoalOptions o;
  if (const char* env = std::getenv("QLIN_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) throw ValidationError("QLIN_TOL must be a positive number");
    o.rel_tolerance = v;
  }
  if (tol) {
    if (!(*tol > 0)) throw ValidationError("--tol must be positive");
    o.rel_tolerance = *tol;
  }
  return o;
}

Json tolerances_json(const GoalOptions& o) {
  return {{"markov_relative", o.rel_tolerance},
          {"geometric", o.geometric_tolerance},
          {"krylov_relative", o.krylov_tolerance},
          {"kernel_relative", o.kernel_tolerance}};
}

MeasurementSplit split_for(const QuantumLinearSystem& plant, const std::vector<Index>& chans,
                           const std::vector<double>& angles) {
  if (!angles.empty()) {
    if (angles.size() != chans.size())
      throw ShapeError("expected " + std::to_string(chans.size()) + " measurement angles, got " +
                       std::to_string(angles.size()));
    return homodyne_split(angles);
  }
  std::vector<double> a;
  for (Index j : chans) a.push_back(plant.channels()[j].homodyne_angle.value_or(0.0));
  return homodyne_split(a);
}

std::vector<Index> all_channels(const QuantumLinearSystem& plant) {
  std::vector<Index> v;
  for (Index i = 0; i < plant.channel_count(); ++i) v.push_back(i);
  return v;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string path;
  std::string goal = "all";
  std::string ba_port = "P";
  std::string output_port = "y";
  std::string noise_port = "W";
  std::string field_port = "Wout";
  std::optional<double> tol;
  bool json = false;
};

bool has_ports(const StateSpaceModel& m, const PortList& ins, const PortList& outs) {
  for (const auto& p : ins)
    if (!m.has_input(p)) return false;
  for (const auto& p : outs)
    if (!m.has_output(p)) return false;
  return true;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const std::string bytes = read_bytes(a.path);
  const Json j = parse_bytes(bytes, a.path);
  const GoalOptions opts = goal_options(a.tol);

  StateSpaceModel model;
  Json summary;
  if (j.is_object() && j.value("kind", "system") == "state_space") {
    model = io::state_space_from_json(j);
    summary["kind"] = "state_space";
  } else {
    const QuantumLinearSystem sys = io::system_from_json(j);
    model = to_state_space(sys, default_measurement(sys));
    summary["kind"] = "system";
    summary["modes"] = sys.modes();
    summary["channels"] = sys.channel_count();
  }
  summary["states"] = model.states();
  Json ins = Json::array(), outs = Json::array();
  for (const auto& p : model.inputs()) ins.push_back(p.name);
  for (const auto& p : model.outputs()) outs.push_back(p.name);
  summary["inputs"] = ins;
  summary["outputs"] = outs;

  Json ctrl_dims = Json::object(), obs_dims = Json::object();
  for (const auto& p : model.inputs())
    ctrl_dims[p.name] = controllable_subspace(model, {p.name}, opts.krylov_tolerance).rank();
  for (const auto& p : model.outputs())
    obs_dims[p.name] = observable_subspace(model, {p.name}, opts.krylov_tolerance).rank();

  std::vector<Goal> goals;
  if (a.goal == "all") goals = {Goal::kBAE, Goal::kQND, Goal::kDFS};
  else goals = {parse_goal(a.goal)};

  Json verdicts = Json::object();
  bool consistent = true;
  for (Goal g : goals) {
    PortList ins_g, outs_g;
    switch (g) {
      case Goal::kBAE: ins_g = {a.ba_port}; outs_g = {a.output_port}; break;
      case Goal::kQND: ins_g = {a.noise_port}; outs_g = {a.output_port}; break;
      case Goal::kDFS: ins_g = {a.noise_port}; outs_g = {a.field_port}; break;
    }
    Json ports = {{"inputs", ins_g}, {"outputs", outs_g}};
    if (!has_ports(model, ins_g, outs_g)) {
      verdicts[to_string(g)] = {{"goal", to_string(g)}, {"applicable", false}, {"ports", ports},
                                {"reason", "required ports are not present"}};
      continue;
    }
    GoalVerdict v;
    switch (g) {
      case Goal::kBAE: v = check_bae(model, ins_g, outs_g, opts); break;
      case Goal::kQND: v = find_qnd(model, ins_g, outs_g, std::nullopt, opts); break;
      case Goal::kDFS: v = find_dfs(model, ins_g, outs_g, std::nullopt, opts); break;
    }
    consistent = consistent && v.method_agreement;
    Json vj = io::to_json(v);
    vj["applicable"] = true;
    vj["ports"] = ports;
    verdicts[to_string(g)] = std::move(vj);
  }

  Json report = {{"system", summary},
                 {"subspaces", {{"controllable", ctrl_dims}, {"observable", obs_dims}}},
                 {"verdicts", verdicts},
                 {"provenance",
                  {{"input", a.path},
                   {"fnv1a64", fnv1a_hex(bytes)},
                   {"tool_version", version()},
                   {"tolerances", tolerances_json(opts)}}}};
  if (a.json) {
    out << report.dump(2) << "\n";
  } else {
    out << "system: " << summary.dump() << "\n";
    out << "controllable dims: " << ctrl_dims.dump() << "\n";
    out << "observable dims: " << obs_dims.dump() << "\n";
    for (auto& [k, v] : verdicts.items()) {
      if (!v.value("applicable", false)) {
        out << k << ": not applicable (" << v["reason"].get<std::string>() << ")\n";
        continue;
      }
      out << k << ": " << (v["achieved"].get<bool>() ? "achieved" : "not achieved")
          << "  residual=" << io::format_double(v["residual"].get<double>())
          << "  tolerance=" << io::format_double(v["tolerance"].get<double>())
          << "  agreement=" << (v["method_agreement"].get<bool>() ? "yes" : "NO") << "\n";
      for (const auto& w : v["witnesses"]) {
        out << "  witness [";
        for (std::size_t i = 0; i < w.size(); ++i) out << (i ? ", " : "") << io::format_double(w[i].get<double>());
        out << "]\n";
      }
    }
    out << "input hash: " << fnv1a_hex(bytes) << "\n";
  }
  return consistent ? kExitOk : kExitInconsistent;
}

// ---- closedloop -----------------------------------------------------------

// JSON cannot carry the column count of an empty matrix.
ClassicalController stateless_shapes(const ClassicalController& k, Index channels) {
  if (k.A_K.size() || k.B_K.size() || k.C_K.size()) return k;
  return ClassicalController::zero(0, channels, 2 * channels);
}

int cmd_closedloop(const std::string& plant_path, const std::string& ctrl_path,
                   const std::string& scheme, std::ostream& out) {
  const QuantumLinearSystem plant = io::system_from_json(io::read_json_file(plant_path));
  const io::ControllerSpec spec = io::controller_from_json(io::read_json_file(ctrl_path));
  if (!scheme.empty() && io::parse_controller_scheme(scheme) != spec.scheme)
    throw ValidationError("--scheme " + scheme + " does not match the controller's scheme '" +
                          io::to_string(spec.scheme) + "'");
  Json result;
  switch (spec.scheme) {
    case io::ControllerScheme::kMF1:
      result = io::to_json(mf_type1(plant, stateless_shapes(spec.classical, plant.channel_count()),
                                    split_for(plant, all_channels(plant), spec.angles)));
      break;
    case io::ControllerScheme::kMF2: {
      const auto fb = plant.channels_with_role(ChannelRole::kFeedback);
      const auto ev = plant.channels_with_role(ChannelRole::kEvaluation);
      const ClassicalController k = stateless_shapes(spec.classical, static_cast<Index>(fb.size()));
      result = io::to_json(mf_type2(plant, k, split_for(plant, fb, spec.angles),
                                    split_for(plant, ev, spec.evaluation_angles)));
      break;
    }
    case io::ControllerScheme::kCF1:
      result = io::to_json(cf_type1(plant, spec.quantum));
      break;
    case io::ControllerScheme::kCF2:
      result = io::to_json(cf_type2(plant, spec.quantum));
      break;
    case io::ControllerScheme::kDirect: {
      const auto meas = default_measurement(plant);
      if (!meas) throw ValidationError("direct feedback needs a measured channel in the plant");
      result = io::to_json(direct_mf(plant, *meas, spec.tau, spec.gain, spec.modulation));
      break;
    }
  }
  out << result.dump(2) << "\n";
  return kExitOk;
}

// ---- spectrum -------------------------------------------------------------

struct SpectrumArgs {
  std::string path;
  std::string output = "y";
  double omega_min = 0.1;
  double omega_max = 10.0;
  int points = 50;
  std::vector<std::string> squeeze;
  std::string sql;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  if (!(a.omega_min > 0) || !(a.omega_max >= a.omega_min))
    throw DomainError("frequency grid must satisfy 0 < omega-min <= omega-max");
  if (a.points < 1) throw DomainError("--points must be at least 1");
  const QuantumLinearSystem sys = io::system_from_json(io::read_json_file(a.path));
  const auto meas = default_measurement(sys);
  const StateSpaceModel model = to_state_space(sys, meas);

  PortList noise;
  std::vector<bool> measured(static_cast<std::size_t>(sys.channel_count()), false);
  if (meas) {
    noise = {"Q", "P"};
    for (Index j : meas->channels) measured[static_cast<std::size_t>(j)] = true;
  }
  for (Index j = 0; j < sys.channel_count(); ++j)
    if (!measured[static_cast<std::size_t>(j)]) noise.push_back(sys.channels()[j].label);
  NoiseVariances var = vacuum_variances(model, noise);
  for (const auto& s : a.squeeze) {
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) throw ValidationError("--squeeze expects port:r, got '" + s + "'");
    double r = 0;
    try {
      r = std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError("--squeeze expects a numeric r in '" + s + "'");
    }
    apply_squeezing(var, s.substr(0, colon), r);
  }

  std::optional<std::pair<double, double>> sql;
  if (!a.sql.empty()) {
    const auto comma = a.sql.find(',');
    if (comma == std::string::npos) throw ValidationError("--sql expects m,L");
    try {
      sql = std::make_pair(std::stod(a.sql.substr(0, comma)), std::stod(a.sql.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ValidationError("--sql expects two numbers m,L");
    }
    if (!(sql->first > 0) || !(sql->second > 0)) throw DomainError("--sql needs positive m and L");
  }
  std::optional<StrainReferredSignal> strain;
  if (sql && model.has_input("F"))
    strain = normalized_gw_signal(model, a.output, 0.0, sql->second, sql->first);

  const auto omegas = logspace(a.omega_min, a.omega_max, a.points);
  std::ostringstream csv;
  csv << "omega,S,S_sql\n";
  for (double w : omegas) {
    const double s = strain ? strain->noise_power(var, w) : noise_power(model, a.output, var, w);
    csv << io::format_double(w) << "," << io::format_double(s) << ","
        << (sql ? io::format_double(sql_value(sql->first, sql->second, w)) : std::string("nan"))
        << "\n";
  }
  out << csv.str();
  return kExitOk;
}

// ---- nogo -----------------------------------------------------------------

int cmd_nogo(const std::string& path, const std::string& goal, const std::string& scheme,
             long long trials, std::uint64_t seed, long long max_dim, unsigned threads,
             std::ostream& out) {
  if (trials < 0) throw DomainError("--trials must be non-negative");
  const QuantumLinearSystem plant = io::system_from_json(io::read_json_file(path));
  NogoOptions opts;
  opts.max_controller_dim = max_dim;
  opts.threads = threads;
  opts.goal_options = goal_options(std::nullopt);
  const std::string id = std::filesystem::path(path).stem().string();
  const NogoReport rep =
      verify_nogo(plant, id, parse_goal(goal), parse_scheme(scheme), trials, seed, opts);
  Json j = io::to_json(rep);
  j["tolerances"] = tolerances_json(opts.goal_options);
  out << j.dump(2) << "\n";
  return rep.violations == 0 && rep.inconsistent == 0 ? kExitOk : kExitInconsistent;
}

// ---- scenario -------------------------------------------------------------

int cmd_scenario(const std::string& name, const std::vector<std::string>& params, bool list,
                 std::ostream& out) {
  if (list || name.empty()) {
    for (const auto& s : scenario_registry()) {
      out << s.name << ": " << s.summary << " (";
      bool first = true;
      for (const auto& [k, v] : s.defaults) {
        out << (first ? "" : ", ") << k << "=" << io::format_double(v);
        first = false;
      }
      out << ")\n";
    }
    if (!list) throw ValidationError("scenario name required");
    return kExitOk;
  }
  ScenarioParams overrides;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ValidationError("--param expects k=v, got '" + p + "'");
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("--param value must be numeric in '" + p + "'");
    }
    overrides[p.substr(0, eq)] = v;
  }
  out << io::to_json(build_scenario(name, overrides)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

std::string version() { return QLIN_VERSION; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural analysis of linear quantum feedback systems", "qlin"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "controllability/observability report and goal verdicts");
  analyze->add_option("path", an.path, "system or state-space JSON")->required();
  analyze->add_option("--goal", an.goal, "all, bae, qnd or dfs")
      ->check(CLI::IsMember({"all", "bae", "qnd", "dfs"}));
  analyze->add_option("--ba-port", an.ba_port, "back-action input port");
  analyze->add_option("--output-port", an.output_port, "measured output port");
  analyze->add_option("--noise-port", an.noise_port, "noise input port for QND/DFS");
  analyze->add_option("--field-port", an.field_port, "output field port for DFS");
  analyze->add_option("--tol", an.tol, "relative Markov tolerance (overrides QLIN_TOL)");
  analyze->add_flag("--json", an.json, "machine-readable report");

  std::string plant_path, ctrl_path, scheme;
  auto* closed = app.add_subcommand("closedloop", "assemble a feedback loop");
  closed->add_option("plant", plant_path, "plant system JSON")->required();
  closed->add_option("controller", ctrl_path, "controller JSON")->required();
  closed->add_option("--scheme", scheme, "expected scheme: mf1, mf2, cf1, cf2 or direct");

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "noise power spectrum as CSV");
  spectrum->add_option("path", sp.path, "system JSON")->required();
  spectrum->add_option("--output", sp.output, "single-row output port");
  spectrum->add_option("--omega-min", sp.omega_min, "lowest angular frequency");
  spectrum->add_option("--omega-max", sp.omega_max, "highest angular frequency");
  spectrum->add_option("--points", sp.points, "number of log-spaced points");
  spectrum->add_option("--squeeze", sp.squeeze, "port:r squeezing")->take_all();
  spectrum->add_option("--sql", sp.sql, "m,L: refer to strain and add the quantum limit");

  std::string ng_path, ng_goal = "bae", ng_scheme = "mf1";
  long long ng_trials = 500, ng_max_dim = -1;
  std::uint64_t ng_seed = 1;
  unsigned ng_threads = 0;
  auto* nogo = app.add_subcommand("nogo", "randomized check of the measurement-feedback no-go results");
  nogo->add_option("path", ng_path, "plant system JSON")->required();
  nogo->add_option("--goal", ng_goal, "bae, qnd or dfs");
  nogo->add_option("--scheme", ng_scheme, "mf1 or mf2");
  nogo->add_option("--trials", ng_trials, "number of sampled controllers");
  nogo->add_option("--seed", ng_seed, "master seed");
  nogo->add_option("--max-dim", ng_max_dim, "largest controller dimension (default 2n+2)");
  nogo->add_option("--threads", ng_threads, "worker threads (0 = all cores)");

  std::string sc_name;
  std::vector<std::string> sc_params;
  bool sc_list = false;
  auto* scen = app.add_subcommand("scenario", "emit a built-in example system");
  scen->add_option("name", sc_name, "scenario name");
  scen->add_option("--param", sc_params, "k=v parameter override")->take_all();
  scen->add_flag("--list", sc_list, "list scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(an, out);
    if (closed->parsed()) return cmd_closedloop(plant_path, ctrl_path, scheme, out);
    if (spectrum->parsed()) return cmd_spectrum(sp, out);
    if (nogo->parsed())
      return cmd_nogo(ng_path, ng_goal, ng_scheme, ng_trials, ng_seed, ng_max_dim, ng_threads, out);
    if (scen->parsed()) return cmd_scenario(sc_name, sc_params, sc_list, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitInconsistent;
  }
  return kExitValidation;
}

}  // namespace qlin::cli
