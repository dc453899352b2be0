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

#include "qlin/interconnect.hpp"

#include <cmath>

#include "qlin/errors.hpp"

namespace qlin {
namespace {

// Rows of the identity selecting the listed channels' quadratures (2k x 2m).
Matrix channel_selector(const std::vector<Index>& chans, Index m) {
  Matrix e = Matrix::Zero(2 * static_cast<Index>(chans.size()), 2 * m);
  for (std::size_t k = 0; k < chans.size(); ++k)
    e.block(2 * static_cast<Index>(k), 2 * chans[k], 2, 2) = Matrix::Identity(2, 2);
  return e;
}

void check_controller(const ClassicalController& k, Index inputs, Index outputs) {
  const Index d = k.A_K.rows();
  if (k.A_K.cols() != d) throw ShapeError("A_K must be square");
  if (k.B_K.rows() != d || k.B_K.cols() != inputs)
    throw ShapeError("B_K must be " + std::to_string(d) + " x " + std::to_string(inputs) +
                     ", got " + shape_str(k.B_K));
  if (k.C_K.rows() != outputs || k.C_K.cols() != d)
    throw ShapeError("C_K must be " + std::to_string(outputs) + " x " + std::to_string(d) +
                     ", got " + shape_str(k.C_K));
}

Vector extended_force(const QuantumLinearSystem& plant, Index extra) {
  Vector f = Vector::Zero(2 * plant.modes() + extra);
  f.head(2 * plant.modes()) = *plant.force();
  return f;
}

std::vector<std::string> joined_labels(const QuantumLinearSystem& plant,
                                       const QuantumController& ctrl) {
  std::vector<std::string> out = plant.mode_labels();
  if (!ctrl.mode_labels.empty()) {
    if (static_cast<Index>(ctrl.mode_labels.size()) != ctrl.modes())
      throw ShapeError("controller mode_labels has the wrong length");
    out.insert(out.end(), ctrl.mode_labels.begin(), ctrl.mode_labels.end());
  } else {
    for (Index i = 0; i < ctrl.modes(); ++i) out.push_back("k" + std::to_string(i + 1));
  }
  return out;
}

void check_quantum_controller(const QuantumController& k) {
  if (k.G_K.rows() != k.G_K.cols() || k.G_K.rows() % 2 != 0)
    throw ShapeError("G_K must be 2n_K x 2n_K, got " + shape_str(k.G_K));
  const double scale = k.G_K.size() ? k.G_K.cwiseAbs().maxCoeff() : 0.0;
  if (k.G_K.size() && (k.G_K - k.G_K.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("G_K is not symmetric");
}

}  // namespace

ClassicalController ClassicalController::zero(Index dim, Index inputs, Index outputs) {
  return {Matrix::Zero(dim, dim), Matrix::Zero(dim, inputs), Matrix::Zero(outputs, dim)};
}

void validate_scattering(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0)
    throw ShapeError("scattering matrix must be 2m x 2m, got " + shape_str(s));
  const Index m = s.rows() / 2;
  const Matrix id = Matrix::Identity(2 * m, 2 * m);
  const Matrix sg = sigma(m);
  const double orth = (s.transpose() * s - id).cwiseAbs().maxCoeff();
  const double symp = (s * sg * s.transpose() - sg).cwiseAbs().maxCoeff();
  if (orth > 1e-12 || symp > 1e-12)
    throw ValidationError("scattering matrix is not orthogonal and symplectic");
}

StateSpaceModel mf_type1(const QuantumLinearSystem& plant, const ClassicalController& ctrl,
                         const MeasurementSplit& split) {
  const Index m = plant.channel_count();
  split.validate();
  if (split.m != m)
    throw ShapeError("type-1 feedback measures all " + std::to_string(m) +
                     " channels, split has width " + std::to_string(split.m));
  check_controller(ctrl, m, 2 * m);
  const Index d = ctrl.dim();
  const Matrix& a = plant.drift();
  const Matrix& b = plant.noise_input();
  const Matrix& c = plant.C();
  const Matrix& m1 = split.M1;
  const Matrix& m2 = split.M2;

  const Matrix ae = block2(a, b * ctrl.C_K, ctrl.B_K * m1 * c, ctrl.A_K + ctrl.B_K * m1 * ctrl.C_K);
  StateSpaceModel model(ae);
  model = model.with_input("W", vcat(b, ctrl.B_K * m1))
              .with_input("Q", vcat(b * m1.transpose(), ctrl.B_K))
              .with_input("P", vcat(b * m2.transpose(), Matrix::Zero(d, m)))
              .with_output("y", hcat(m1 * c, m1 * ctrl.C_K))
              .with_output("Wout", hcat(c, ctrl.C_K))
              .with_feedthrough("y", "Q", Matrix::Identity(m, m))
              .with_feedthrough("y", "W", m1)
              .with_feedthrough("Wout", "W", Matrix::Identity(2 * m, 2 * m))
              .with_feedthrough("Wout", "Q", m1.transpose())
              .with_feedthrough("Wout", "P", m2.transpose());
  if (plant.force()) model = model.with_input("F", extended_force(plant, d));
  return model;
}

StateSpaceModel mf_type2(const QuantumLinearSystem& plant, const ClassicalController& ctrl,
                         const MeasurementSplit& feedback_split,
                         const MeasurementSplit& evaluation_split) {
  const Index m = plant.channel_count();
  const auto fb = plant.channels_with_role(ChannelRole::kFeedback);
  const auto ev = plant.channels_with_role(ChannelRole::kEvaluation);
  if (fb.empty() || ev.empty())
    throw ValidationError("type-2 feedback needs at least one feedback and one evaluation channel");
  if (static_cast<Index>(fb.size() + ev.size()) != m)
    throw ValidationError("type-2 feedback requires every channel to be feedback or evaluation");
  feedback_split.validate();
  evaluation_split.validate();
  if (feedback_split.m != static_cast<Index>(fb.size()))
    throw ShapeError("feedback split width does not match the feedback channel count");
  if (evaluation_split.m != static_cast<Index>(ev.size()))
    throw ShapeError("evaluation split width does not match the evaluation channel count");
  const Index m_fb = feedback_split.m;
  const Index m_ev = evaluation_split.m;
  check_controller(ctrl, m_fb, 2 * m);
  const Index d = ctrl.dim();

  const Matrix e_fb = channel_selector(fb, m);
  const Matrix e_ev = channel_selector(ev, m);
  const Matrix& a = plant.drift();
  const Matrix& b = plant.noise_input();
  const Matrix c1 = e_fb * plant.C();
  const Matrix c2 = e_ev * plant.C();
  const Matrix ck1 = e_fb * ctrl.C_K;
  const Matrix ck2 = e_ev * ctrl.C_K;
  const Matrix b1 = b * e_fb.transpose();
  const Matrix b2 = b * e_ev.transpose();
  const Matrix& mm = feedback_split.M1;
  const Matrix& m1 = evaluation_split.M1;
  const Matrix& m2 = evaluation_split.M2;

  const Matrix ae = block2(a, b * ctrl.C_K, ctrl.B_K * mm * c1, ctrl.A_K + ctrl.B_K * mm * ck1);
  StateSpaceModel model(ae);
  model = model.with_input("W", vcat(b, ctrl.B_K * mm * e_fb))
              .with_input("Wfb", vcat(b1, ctrl.B_K * mm))
              .with_input("Q", vcat(b2 * m1.transpose(), Matrix::Zero(d, m_ev)))
              .with_input("P", vcat(b2 * m2.transpose(), Matrix::Zero(d, m_ev)))
              .with_output("y", hcat(mm * c1, mm * ck1))
              .with_output("z", hcat(m1 * c2, m1 * ck2))
              .with_output("Wout", hcat(plant.C(), ctrl.C_K))
              .with_feedthrough("y", "W", mm * e_fb)
              .with_feedthrough("y", "Wfb", mm)
              .with_feedthrough("z", "W", m1 * e_ev)
              .with_feedthrough("z", "Q", Matrix::Identity(m_ev, m_ev))
              .with_feedthrough("Wout", "W", Matrix::Identity(2 * m, 2 * m))
              .with_feedthrough("Wout", "Wfb", e_fb.transpose())
              .with_feedthrough("Wout", "Q", e_ev.transpose() * m1.transpose())
              .with_feedthrough("Wout", "P", e_ev.transpose() * m2.transpose());
  if (plant.force()) model = model.with_input("F", extended_force(plant, d));
  return model;
}

QuantumLinearSystem cf_type1(const QuantumLinearSystem& plant, const QuantumController& ctrl) {
  check_quantum_controller(ctrl);
  const Index m = plant.channel_count();
  const Index nk2 = ctrl.G_K.rows();
  if (ctrl.C1.rows() != 2 * m || ctrl.C2.rows() != 2 * m)
    throw ShapeError("C1 and C2 must have the plant's " + std::to_string(2 * m) + " rows");
  if (ctrl.C1.cols() != nk2 || ctrl.C2.cols() != nk2)
    throw ShapeError("C1 and C2 must have one column per controller quadrature");
  const Matrix sg = sigma(m);
  const Matrix& c = plant.C();
  const Matrix off = c.transpose() * sg * ctrl.C1 / 2.0 - c.transpose() * sg * ctrl.C2 / 2.0;
  const Matrix gk = ctrl.G_K + ctrl.C1.transpose() * sg.transpose() * ctrl.C2 / 2.0 +
                    ctrl.C2.transpose() * sg * ctrl.C1 / 2.0;
  Matrix ge = block2(plant.G(), off, off.transpose(), gk);
  ge = (ge + ge.transpose()).eval() / 2.0;
  const Matrix ce = hcat(c, ctrl.C1 + ctrl.C2);
  std::optional<Vector> force;
  if (plant.force()) force = extended_force(plant, nk2);
  return build_system(ge, ce, plant.channels(), force, joined_labels(plant, ctrl));
}

QuantumLinearSystem cf_type2(const QuantumLinearSystem& plant, const QuantumController& ctrl) {
  check_quantum_controller(ctrl);
  const Index m = plant.channel_count();
  const auto fb = plant.channels_with_role(ChannelRole::kFeedback);
  const auto ev = plant.channels_with_role(ChannelRole::kEvaluation);
  if (fb.empty() || fb.size() != ev.size())
    throw ValidationError("type-2 coherent feedback pairs feedback and evaluation channels one to one");
  const Index mf = static_cast<Index>(fb.size());
  validate_scattering(ctrl.S);
  if (ctrl.S.rows() != 2 * mf) throw ShapeError("S must act on the feedback field");
  const Index nk2 = ctrl.G_K.rows();
  if (ctrl.C_K.rows() != 2 * mf || ctrl.C_K.cols() != nk2)
    throw ShapeError("C_K must be " + std::to_string(2 * mf) + " x " + std::to_string(nk2));
  const Matrix c1 = channel_selector(fb, m) * plant.C();
  const Matrix c2 = channel_selector(ev, m) * plant.C();
  const Matrix& s = ctrl.S;
  const Matrix sg = sigma(mf);
  const Matrix sc1 = s * c1;
  const Matrix top = plant.G() + (c2.transpose() * sg * sc1 + sc1.transpose() * sg.transpose() * c2) / 2.0;
  const Matrix low = ctrl.C_K.transpose() * sg * (sc1 - c2) / 2.0;
  Matrix ge = block2(top, low.transpose(), low, ctrl.G_K);
  ge = (ge + ge.transpose()).eval() / 2.0;
  const Matrix ce = hcat(sc1 + c2, ctrl.C_K);
  std::vector<Channel> channels;
  for (Index j : ev) channels.push_back(plant.channels()[j]);
  std::optional<Vector> force;
  if (plant.force()) force = extended_force(plant, nk2);
  return build_system(ge, ce, channels, force, joined_labels(plant, ctrl));
}

StateSpaceModel direct_mf(const QuantumLinearSystem& plant, const Measurement& meas,
                          double tau, double gain, const Vector& modulation) {
  if (!(tau >= 0)) throw DomainError("time constant must be non-negative");
  if (meas.channels.size() != 1 || meas.split.m != 1)
    throw ValidationError("direct feedback needs exactly one measured channel");
  const Index n2 = 2 * plant.modes();
  if (modulation.size() != n2) throw ShapeError("modulation vector must have length 2n");
  const StateSpaceModel open = to_state_space(plant, meas);
  const Matrix& a = plant.drift();
  const Matrix cy = open.C({"y"});
  const Matrix bq = open.B({"Q"});
  const Matrix bp = open.B({"P"});
  const Matrix bw = open.B({"W"});
  const Matrix dyw = open.D({"y"}, {"W"});
  const Matrix& c = plant.C();
  const Index m = plant.channel_count();

  StateSpaceModel model;
  if (tau == 0.0) {
    // u = gain * y eliminated algebraically.
    const Matrix bu = modulation * gain;
    model = StateSpaceModel(a + bu * cy)
                .with_input("W", bw + bu * dyw)
                .with_input("Q", bq + bu)
                .with_input("P", bp)
                .with_output("y", cy)
                .with_output("u", gain * cy)
                .with_output("Wout", c)
                .with_feedthrough("y", "Q", Matrix::Identity(1, 1))
                .with_feedthrough("y", "W", dyw)
                .with_feedthrough("u", "Q", Matrix::Constant(1, 1, gain))
                .with_feedthrough("u", "W", gain * dyw)
                .with_feedthrough("Wout", "W", Matrix::Identity(2 * m, 2 * m))
                .with_feedthrough("Wout", "Q", open.D({"Wout"}, {"Q"}))
                .with_feedthrough("Wout", "P", open.D({"Wout"}, {"P"}));
    if (plant.force()) model = model.with_input("F", *plant.force());
    return model;
  }
  const Matrix ae = block2(a, modulation * gain, cy / tau, Matrix::Constant(1, 1, -1.0 / tau));
  model = StateSpaceModel(ae)
              .with_input("W", vcat(bw, dyw / tau))
              .with_input("Q", vcat(bq, Matrix::Constant(1, 1, 1.0 / tau)))
              .with_input("P", vcat(bp, Matrix::Zero(1, 1)))
              .with_output("y", hcat(cy, Matrix::Zero(1, 1)))
              .with_output("u", hcat(Matrix::Zero(1, n2), Matrix::Constant(1, 1, gain)))
              .with_output("Wout", hcat(c, Matrix::Zero(2 * m, 1)))
              .with_feedthrough("y", "Q", Matrix::Identity(1, 1))
              .with_feedthrough("y", "W", dyw)
              .with_feedthrough("Wout", "W", Matrix::Identity(2 * m, 2 * m))
              .with_feedthrough("Wout", "Q", open.D({"Wout"}, {"Q"}))
              .with_feedthrough("Wout", "P", open.D({"Wout"}, {"P"}));
  if (plant.force()) model = model.with_input("F", vcat(*plant.force(), Matrix::Zero(1, 1)));
  return model;
}

StateSpaceModel direct_controller_filter(double tau, double gain) {
  if (!(tau >= 0)) throw DomainError("time constant must be non-negative");
  if (tau == 0.0) {
    return StateSpaceModel(Matrix(0, 0))
        .with_input("y", Matrix(0, 1))
        .with_output("u", Matrix(1, 0))
        .with_feedthrough("u", "y", Matrix::Constant(1, 1, gain));
  }
  return StateSpaceModel(Matrix::Constant(1, 1, -1.0 / tau))
      .with_input("y", Matrix::Constant(1, 1, 1.0 / tau))
      .with_output("u", Matrix::Constant(1, 1, gain));
}

}  // namespace qlin
