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

#include <map>
#include <string>
#include <vector>

#include "qlin/linalg.hpp"
#include "qlin/state_space.hpp"

namespace qlin {

/// Xi[s] = C (sI - A)^{-1} B + D between two port groups.
struct TransferFunction {
  StateSpaceModel realization;  // reachable and observable part only
  PortList inputs;
  PortList outputs;
};

/// Checks that the ports exist.
TransferFunction transfer_function(const StateSpaceModel& model, PortList inputs,
                                   PortList outputs);

/// Throws SingularityError when cond(sI - A) exceeds 1e12.
CMatrix evaluate(const TransferFunction& tf, Complex s);

/// Per-port quadrature variances, one entry per port column.
using NoiseVariances = std::map<std::string, Vector>;

/// Variance 1/2 on every column of the listed ports.
NoiseVariances vacuum_variances(const StateSpaceModel& model, const PortList& ports);

/// Squeezes a port in place. A width-1 port gets e^{-2r}/2 and its conjugate
/// (Q <-> P) e^{2r}/2; a width-2 channel port gets (e^{-2r}/2, e^{2r}/2) on
/// its (q, p) columns.
void apply_squeezing(NoiseVariances& v, const std::string& port, double r);

/// S[i omega] = sum over ports and columns of |Xi|^2 * variance, for a
/// single-row output.
double noise_power(const StateSpaceModel& model, const std::string& output,
                   const NoiseVariances& variances, double omega);

struct SpectrumCurve {
  std::vector<double> omegas;
  std::vector<double> values;
  NoiseVariances variances;
};

/// 1 / (2 m L^2 omega^2). Throws DomainError for omega = 0 or m, L <= 0.
double sql_value(double m, double L, double omega);
SpectrumCurve sql_curve(double m, double L, const std::vector<double>& omegas);

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int points);

enum class StrainReferral {
  kExact,       // divide by the exact g -> y gain at each frequency
  kFixedScale,  // divide by 2 sqrt(lambda) L, unit gain only for omega >> omega_m
};

/// Strain-referred readout: the force enters as F = -m L omega^2 g.
struct StrainReferredSignal {
  StateSpaceModel model;
  std::string output;
  std::string force_port = "F";
  double mass = 1.0;
  double length = 1.0;
  double lambda = 1.0;
  StrainReferral referral = StrainReferral::kExact;

  /// Gain of the g -> output path before normalization.
  Complex raw_gain(double omega) const;
  /// Gain of the g -> normalized output path.
  Complex gain(double omega) const;
  /// Noise power of the normalized output.
  double noise_power(const NoiseVariances& variances, double omega) const;
  SpectrumCurve spectrum(const NoiseVariances& variances,
                         const std::vector<double>& omegas) const;
};

/// Throws LookupError when the model has no force port.
StrainReferredSignal normalized_gw_signal(const StateSpaceModel& model, const std::string& output,
                                          double lambda, double length, double mass,
                                          StrainReferral referral = StrainReferral::kExact,
                                          const std::string& force_port = "F");

}  // namespace qlin
