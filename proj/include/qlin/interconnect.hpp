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

#include <optional>
#include <string>
#include <vector>

#include "qlin/core_model.hpp"
#include "qlin/linalg.hpp"
#include "qlin/state_space.hpp"

namespace qlin {

/// dx_K/dt = A_K x_K + B_K y,  u = C_K x_K.
/// C_K has one row per plant field quadrature (2m rows, channel order); in
/// the type-2 scheme the rows of feedback channels form C_K1 and the rows of
/// evaluation channels form C_K2.
struct ClassicalController {
  Matrix A_K;
  Matrix B_K;
  Matrix C_K;

  Index dim() const { return A_K.rows(); }
  /// Zero controller with `dim` states.
  static ClassicalController zero(Index dim, Index inputs, Index outputs);
};

/// Quantum controller with Hamiltonian matrix G_K. Type-1 coherent feedback
/// uses the couplings C1 (fed by the plant output) and C2 (returning to the
/// plant input); type-2 uses a single coupling C_K and the scattering S
/// applied to the feedback field.
struct QuantumController {
  Matrix G_K;
  Matrix C1;
  Matrix C2;
  Matrix C_K;
  Matrix S;
  std::vector<std::string> mode_labels;

  Index modes() const { return G_K.rows() / 2; }
};

/// Checks S^T S = I and S Sigma S^T = Sigma to 1e-12.
void validate_scattering(const Matrix& s);

/// Type-1 measurement feedback: every channel is measured with `split` and
/// modulated by u = C_K x_K.
///   inputs:  W, Q, P (and F when the plant has a force)
///   outputs: y (measurement), Wout (all output fields)
StateSpaceModel mf_type1(const QuantumLinearSystem& plant, const ClassicalController& ctrl,
                         const MeasurementSplit& split);

/// Type-2 measurement feedback: feedback-role channels are measured with
/// `feedback_split` and drive the controller; evaluation-role channels are
/// read out with `evaluation_split`.
///   inputs:  W, Wfb (feedback noise), Q, P (evaluation split), F
///   outputs: y (feedback measurement), z (evaluation measurement), Wout
StateSpaceModel mf_type2(const QuantumLinearSystem& plant, const ClassicalController& ctrl,
                         const MeasurementSplit& feedback_split,
                         const MeasurementSplit& evaluation_split);

/// Type-1 coherent feedback: W_out -> controller port 2, controller port 1
/// output -> plant input. Channel labels of the plant are kept.
QuantumLinearSystem cf_type1(const QuantumLinearSystem& plant, const QuantumController& ctrl);

/// Type-2 coherent feedback: feedback output -> S -> controller -> evaluation
/// input. The result has one channel per evaluation channel; its input field
/// is S applied to the feedback input noise.
QuantumLinearSystem cf_type2(const QuantumLinearSystem& plant, const QuantumController& ctrl);

/// Finite-bandwidth direct feedback u = gain * x_K,
/// dx_K/dt = (-x_K + y) / tau, with u entering the plant drift along
/// `modulation`. tau = 0 is the ideal algebraic loop u = gain * y.
/// The plant must have exactly one measured channel.
///   inputs:  W, Q, P (and F);  outputs: y, u, Wout
StateSpaceModel direct_mf(const QuantumLinearSystem& plant, const Measurement& meas,
                          double tau, double gain, const Vector& modulation);

/// The feedback circuit alone: y -> u with transfer gain / (1 + tau s).
StateSpaceModel direct_controller_filter(double tau, double gain);

}  // namespace qlin
