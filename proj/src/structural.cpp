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

#include "qlin/structural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlin/errors.hpp"

namespace qlin {
namespace {

void require_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw ShapeError("subspace ambient dimensions differ: " + std::to_string(a.ambient_dim) +
                     " vs " + std::to_string(b.ambient_dim));
}

Matrix krylov_basis(const Matrix& a, const Matrix& b, double rel_tol) {
  const Index n = a.rows();
  if (b.rows() != n) throw ShapeError("input matrix rows do not match the state dimension");
  const double scale = std::max(opnorm(a), opnorm(b));
  if (n == 0 || b.cols() == 0 || scale == 0.0) return Matrix(n, 0);
  const double tol = rel_tol * scale;

  Matrix v = range(b, tol).basis;
  Matrix block = v;
  while (block.cols() > 0 && v.cols() < n) {
    Matrix w = a * block;
    w -= v * (v.transpose() * w);
    w -= v * (v.transpose() * w);  // second pass for orthogonality
    Matrix fresh = range(w, tol).basis;
    if (fresh.cols() == 0) break;
    Matrix grown(n, v.cols() + fresh.cols());
    grown << v, fresh;
    v = std::move(grown);
    block = std::move(fresh);
  }
  return v;
}

}  // namespace

Subspace Subspace::zero(Index ambient) { return {ambient, Matrix(ambient, 0)}; }

Subspace Subspace::full(Index ambient) {
  return {ambient, Matrix::Identity(ambient, ambient)};
}

Subspace Subspace::coordinate_block(Index ambient, Index first, Index count) {
  if (first < 0 || count < 0 || first + count > ambient)
    throw ShapeError("coordinate block out of range");
  Matrix b = Matrix::Zero(ambient, count);
  b.middleRows(first, count) = Matrix::Identity(count, count);
  return {ambient, b};
}

Matrix Subspace::projector() const { return basis * basis.transpose(); }

double Subspace::relative_distance(const Vector& v) const {
  if (v.size() != ambient_dim) throw ShapeError("vector length does not match ambient dimension");
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  return (v - basis * (basis.transpose() * v)).norm() / nv;
}

bool Subspace::contains(const Vector& v, double tol) const { return relative_distance(v) <= tol; }

Subspace range(const Matrix& m, std::optional<double> tol) {
  if (m.cols() == 0 || m.rows() == 0) return Subspace::zero(m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const double t = tol.value_or(default_rank_tol(m));
  const auto& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > t) ++r;
  return {m.rows(), svd.matrixU().leftCols(r)};
}

Subspace kernel(const Matrix& m, std::optional<double> tol) {
  if (m.rows() == 0 || m.cols() == 0) return Subspace::full(m.cols());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const double t = tol.value_or(default_rank_tol(m));
  const auto& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > t) ++r;
  return {m.cols(), svd.matrixV().rightCols(m.cols() - r)};
}

Subspace complement(const Subspace& s) {
  const Index n = s.ambient_dim;
  if (s.rank() == 0) return Subspace::full(n);
  if (s.rank() == n) return Subspace::zero(n);
  Eigen::JacobiSVD<Matrix> svd(s.basis, Eigen::ComputeFullU);
  return {n, svd.matrixU().rightCols(n - s.rank())};
}

Subspace intersect(const Subspace& a, const Subspace& b, double angle_tol) {
  require_ambient(a, b);
  if (a.empty() || b.empty()) return Subspace::zero(a.ambient_dim);
  // Pairs (x, y) with Qa x close to Qb y. A principal angle t gives the
  // singular value sqrt(2) sin(t / 2) of [Qa, -Qb].
  Matrix m(a.ambient_dim, a.rank() + b.rank());
  m << a.basis, -b.basis;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const double thr = std::sqrt(2.0) * std::sin(angle_tol / 2);
  const auto& s = svd.singularValues();
  Index live = 0;
  while (live < s.size() && s(live) > thr) ++live;
  const Index r = m.cols() - live;
  if (r == 0) return Subspace::zero(a.ambient_dim);
  const Matrix basis = a.basis * svd.matrixV().topRightCorner(a.rank(), r);
  Eigen::JacobiSVD<Matrix> orth(basis, Eigen::ComputeThinU);
  return {a.ambient_dim, orth.matrixU().leftCols(std::min({r, a.rank(), b.rank()}))};
}

Subspace sum(const Subspace& a, const Subspace& b) {
  require_ambient(a, b);
  Matrix both(a.ambient_dim, a.rank() + b.rank());
  both << a.basis, b.basis;
  return range(both, 1e-10);
}

Vector principal_angles(const Subspace& a, const Subspace& b) {
  require_ambient(a, b);
  if (a.rank() > b.rank()) return principal_angles(b, a);
  if (a.empty()) return Vector(0);
  const Vector cosines = Eigen::JacobiSVD<Matrix>(a.basis.transpose() * b.basis).singularValues();
  const Matrix resid = a.basis - b.basis * (b.basis.transpose() * a.basis);
  const Vector sines = Eigen::JacobiSVD<Matrix>(resid).singularValues();
  const Index r = a.rank();
  Vector out(r);
  for (Index i = 0; i < r; ++i) {
    // Small angles are better resolved from the sine.
    const double from_cos = std::acos(std::clamp(cosines(i), -1.0, 1.0));
    out(i) = from_cos < 0.1 ? std::asin(std::clamp(sines(r - 1 - i), 0.0, 1.0)) : from_cos;
  }
  return out;
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  require_ambient(a, b);
  if (a.rank() != b.rank()) return std::numeric_limits<double>::infinity();
  if (a.empty()) return 0.0;
  const Vector ang = principal_angles(a, b);
  return ang.maxCoeff();
}

Matrix controllability_matrix(const StateSpaceModel& model, const PortList& inputs) {
  const Matrix b = model.B(inputs);
  const Index n = model.states();
  Matrix out(n, n * b.cols());
  Matrix blk = b;
  for (Index k = 0; k < n; ++k) {
    out.middleCols(k * b.cols(), b.cols()) = blk;
    blk = model.A() * blk;
  }
  return out;
}

Matrix observability_matrix(const StateSpaceModel& model, const PortList& outputs) {
  const Matrix c = model.C(outputs);
  const Index n = model.states();
  Matrix out(n * c.rows(), n);
  Matrix blk = c;
  for (Index k = 0; k < n; ++k) {
    out.middleRows(k * c.rows(), c.rows()) = blk;
    blk = blk * model.A();
  }
  return out;
}

Subspace controllable_subspace(const Matrix& a, const Matrix& b, double rel_tol) {
  return {a.rows(), krylov_basis(a, b, rel_tol)};
}

Subspace controllable_subspace(const StateSpaceModel& model, const PortList& inputs,
                               double rel_tol) {
  return controllable_subspace(model.A(), model.B(inputs), rel_tol);
}

Subspace observable_subspace(const Matrix& a, const Matrix& c, double rel_tol) {
  return {a.rows(), krylov_basis(a.transpose(), c.transpose(), rel_tol)};
}

Subspace observable_subspace(const StateSpaceModel& model, const PortList& outputs,
                             double rel_tol) {
  return observable_subspace(model.A(), model.C(outputs), rel_tol);
}

double KalmanDecomposition::structural_defect(const PortList& ports) const {
  const Matrix& a = transformed.A();
  const double scale = std::max(1.0, opnorm(a));
  const Index p = primary_dim, r = residual_dim;
  double worst = 0.0;
  auto upd = [&](const Matrix& blk) {
    if (blk.size()) worst = std::max(worst, blk.cwiseAbs().maxCoeff() / scale);
  };
  if (kind == DecompositionKind::kControllable) {
    upd(a.block(p, 0, r, p));
    upd(transformed.B(ports).bottomRows(r));
  } else {
    upd(a.block(0, p, p, r));
    upd(transformed.C(ports).rightCols(r));
  }
  return worst;
}

KalmanDecomposition kalman_decompose(const StateSpaceModel& model, const PortList& ports,
                                     DecompositionKind kind, double rel_tol) {
  const Subspace primary = kind == DecompositionKind::kControllable
                               ? controllable_subspace(model, ports, rel_tol)
                               : observable_subspace(model, ports, rel_tol);
  const Subspace rest = complement(primary);
  KalmanDecomposition out;
  out.kind = kind;
  out.primary_dim = primary.rank();
  out.residual_dim = rest.rank();
  out.T.resize(model.states(), model.states());
  out.T << primary.basis, rest.basis;
  out.transformed = model.transformed(out.T);
  return out;
}

std::vector<Matrix> markov_parameters(const StateSpaceModel& model, const PortList& inputs,
                                      const PortList& outputs, std::optional<Index> count) {
  const Index k = count.value_or(model.states());
  if (k < 0) throw DomainError("Markov parameter count must be non-negative");
  const Matrix c = model.C(outputs);
  Matrix blk = model.B(inputs);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    out.push_back(c * blk);
    blk = model.A() * blk;
  }
  return out;
}

bool classical_subsystem(const StateSpaceModel& model, const Subspace& candidate,
                         const SymplecticForm& form, double tol) {
  if (candidate.ambient_dim != model.states())
    throw ShapeError("candidate subspace does not live in the model state space");
  const Index q = 2 * form.n;
  if (q > candidate.ambient_dim) throw ShapeError("symplectic form exceeds the state dimension");
  const Matrix v = candidate.basis.topRows(q);
  if (v.cols() < 2) return true;
  const Matrix gram = v.transpose() * form.matrix * v;
  return gram.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qlin
