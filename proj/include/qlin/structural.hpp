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

/// Subspace of R^ambient_dim held as an orthonormal basis (columns).
struct Subspace {
  Index ambient_dim = 0;
  Matrix basis;  // ambient_dim x rank

  Index rank() const { return basis.cols(); }
  bool empty() const { return basis.cols() == 0; }

  static Subspace zero(Index ambient);
  static Subspace full(Index ambient);
  /// Span of the coordinate axes [first, first + count).
  static Subspace coordinate_block(Index ambient, Index first, Index count);

  Matrix projector() const;
  /// Distance of v from the subspace relative to |v|.
  double relative_distance(const Vector& v) const;
  bool contains(const Vector& v, double tol = 1e-8) const;
};

Subspace range(const Matrix& m, std::optional<double> tol = std::nullopt);
Subspace kernel(const Matrix& m, std::optional<double> tol = std::nullopt);
Subspace complement(const Subspace& s);
/// Common directions: principal angles below `angle_tol` (radians).
Subspace intersect(const Subspace& a, const Subspace& b, double angle_tol = 1e-8);
/// Smallest subspace containing both.
Subspace sum(const Subspace& a, const Subspace& b);

/// Principal angles in ascending order; length min(rank a, rank b).
Vector principal_angles(const Subspace& a, const Subspace& b);
/// Largest principal angle between equal-rank subspaces; +inf on rank mismatch.
double subspace_distance(const Subspace& a, const Subspace& b);

/// [B, AB, ..., A^{N-1}B] over the listed input ports.
Matrix controllability_matrix(const StateSpaceModel& model, const PortList& inputs);
/// [C; CA; ...; CA^{N-1}] over the listed output ports.
Matrix observability_matrix(const StateSpaceModel& model, const PortList& outputs);

/// Range of the controllability matrix, grown one orthonormal Krylov block
/// at a time. A new direction is kept when its residual exceeds
/// rel_tol * max(|A|, |B|).
Subspace controllable_subspace(const Matrix& a, const Matrix& b, double rel_tol = 1e-10);
Subspace controllable_subspace(const StateSpaceModel& model, const PortList& inputs,
                               double rel_tol = 1e-10);
/// Range of the transposed observability matrix.
Subspace observable_subspace(const Matrix& a, const Matrix& c, double rel_tol = 1e-10);
Subspace observable_subspace(const StateSpaceModel& model, const PortList& outputs,
                             double rel_tol = 1e-10);

enum class DecompositionKind { kControllable, kObservable };

struct KalmanDecomposition {
  DecompositionKind kind = DecompositionKind::kControllable;
  Matrix T;             // orthogonal, columns [primary basis, complement]
  Index primary_dim = 0;   // controllable (or observable) block size
  Index residual_dim = 0;  // uncontrollable (or unobservable) block size
  StateSpaceModel transformed;

  /// Largest entry of the blocks that must vanish, relative to max(1, |A|).
  double structural_defect(const PortList& ports) const;
};

KalmanDecomposition kalman_decompose(const StateSpaceModel& model, const PortList& ports,
                                     DecompositionKind kind, double rel_tol = 1e-10);

/// [CB, CAB, ..., CA^{count-1}B] between the port groups; count defaults to N.
std::vector<Matrix> markov_parameters(const StateSpaceModel& model, const PortList& inputs,
                                      const PortList& outputs,
                                      std::optional<Index> count = std::nullopt);

/// True iff every pair of basis vectors is Sigma-orthogonal, i.e. the
/// variables v^T x commute. The candidate lives on the 2n quadrature states.
bool classical_subsystem(const StateSpaceModel& model, const Subspace& candidate,
                         const SymplecticForm& form, double tol = 1e-10);

}  // namespace qlin
