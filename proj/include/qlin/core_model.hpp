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

#include "qlin/linalg.hpp"
#include "qlin/state_space.hpp"

namespace qlin {

enum class ChannelRole { kFeedback, kEvaluation, kEnvironment };

std::string to_string(ChannelRole role);
ChannelRole parse_channel_role(const std::string& s);

struct Channel {
  std::string label;
  ChannelRole role = ChannelRole::kFeedback;
  // Homodyne angle of the quadrature recorded on this channel, if any
  // (0 selects Q, pi/2 selects P).
  std::optional<double> homodyne_angle;
};

/// Open linear quantum system in quadrature form (hbar = 1):
///   dx/dt = A x + Sigma_n C^T Sigma_m W,   W_out = C x + W,
/// with A = Sigma_n (G + C^T Sigma_m C / 2). Immutable once built.
class QuantumLinearSystem {
 public:
  Index modes() const { return g_.rows() / 2; }
  Index channel_count() const { return c_.rows() / 2; }

  const Matrix& G() const { return g_; }
  const Matrix& C() const { return c_; }
  const Matrix& drift() const { return a_; }
  /// Sigma_n C^T Sigma_m.
  const Matrix& noise_input() const { return b_; }

  const std::vector<Channel>& channels() const { return channels_; }
  const std::optional<Vector>& force() const { return force_; }
  const std::vector<std::string>& mode_labels() const { return mode_labels_; }

  Index channel_index(const std::string& label) const;
  std::vector<Index> channels_with_role(ChannelRole role) const;
  /// Rows of C belonging to the listed channels, in the given order.
  Matrix coupling_rows(const std::vector<Index>& channels) const;

  /// Max |entry| of the antisymmetric part of Sigma_n^T A - C^T Sigma_m C / 2.
  double realizability_defect() const;

 private:
  friend QuantumLinearSystem build_system(Matrix, Matrix, std::vector<Channel>,
                                          std::optional<Vector>,
                                          std::vector<std::string>);
  QuantumLinearSystem() = default;

  Matrix g_, c_, a_, b_;
  std::vector<Channel> channels_;
  std::optional<Vector> force_;
  std::vector<std::string> mode_labels_;
};

/// Validates and assembles a system. G must be symmetric to 1e-12 relative
/// to its largest entry (it is then symmetrized exactly); dimensions must be
/// even; entries finite. Empty `channels` yields labels W1..Wm with the
/// feedback role; empty `mode_labels` yields a1..an.
QuantumLinearSystem build_system(Matrix g, Matrix c,
                                 std::vector<Channel> channels = {},
                                 std::optional<Vector> force = std::nullopt,
                                 std::vector<std::string> mode_labels = {});

/// (M1, M2) pair: M1 selects the measured quadratures, M2 their conjugates.
struct MeasurementSplit {
  Index m = 0;
  Matrix M1;  // m x 2m
  Matrix M2;  // m x 2m

  /// Largest violation among the seven symplectic/orthogonal identities.
  double defect() const;
  /// Throws ValidationError if defect() > 1e-12 * m.
  void validate() const;
  /// Rows stacked as [M1; M2]; not interleaved.
  Matrix stacked() const;
};

enum class Quadrature { kQ, kP };

MeasurementSplit homodyne_split(const std::vector<Quadrature>& selectors);
/// Per-channel angle; M1 row block (cos t, sin t), M2 row block (-sin t, cos t).
MeasurementSplit homodyne_split(const std::vector<double>& angles);
/// Splits a 2m x 2m orthogonal symplectic matrix (interleaved ordering)
/// into its even rows (M1) and odd rows (M2).
MeasurementSplit split_from_symplectic(const Matrix& m);

/// Appends `extra_channels` vacuum channels with zero coupling rows, the
/// joint-field form of simultaneous (dual homodyne) quadrature measurement.
QuantumLinearSystem augment_with_vacuum(const QuantumLinearSystem& sys,
                                        Index extra_channels);

/// From a passive annihilation-operator description
///   da/dt = D a - K^H A_in,   A_out = K a + A_in,
/// where row j of K is couplings[j].
QuantumLinearSystem complex_to_quadrature(const CMatrix& drift,
                                          const std::vector<CVector>& couplings);

struct ComplexDescription {
  CMatrix drift;
  std::vector<CVector> couplings;
};

/// Inverse of complex_to_quadrature for passive systems.
ComplexDescription quadrature_to_complex(const QuantumLinearSystem& sys);

struct Measurement {
  std::vector<Index> channels;  // measured channel indices
  MeasurementSplit split;       // width matches channels.size()
};

/// Measurement assembled from the per-channel homodyne angles, if any.
std::optional<Measurement> default_measurement(const QuantumLinearSystem& sys);

/// Named-port realization of a quantum system.
///   inputs:  "W" (all noise), one port per channel label, "F" when a force
///            is present, and "Q"/"P" (shot/back-action quadratures of the
///            measured channels) when a measurement is given;
///   outputs: "Wout" (all output fields), "<label>out" per channel, and "y"
///            (measured quadratures) when a measurement is given.
StateSpaceModel to_state_space(const QuantumLinearSystem& sys,
                               const std::optional<Measurement>& meas);

}  // namespace qlin
