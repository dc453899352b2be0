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

#include "qlin/goals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qlin/errors.hpp"

namespace qlin {
namespace {

struct Normalized {
  Matrix a;  // A / max(1, |A|)
  Matrix b;  // B / |B| (zero when B = 0)
  Matrix c;  // C / |C|
};

Normalized normalize(const Matrix& a, const Matrix& b, const Matrix& c) {
  Normalized out{a / std::max(1.0, opnorm(a)), b, c};
  if (const double nb = opnorm(b); nb > 0) out.b /= nb;
  if (const double nc = opnorm(c); nc > 0) out.c /= nc;
  return out;
}

// Rows (A^k B)^T for k < N.
Matrix uncontrollability_stack(const Matrix& a, const Matrix& b) {
  const Index n = a.rows();
  Matrix out(n * b.cols(), n);
  Matrix blk = b;
  for (Index k = 0; k < n; ++k) {
    out.middleRows(k * b.cols(), b.cols()) = blk.transpose();
    blk = a * blk;
  }
  return out;
}

Matrix unobservability_stack(const Matrix& a, const Matrix& c) {
  const Index n = a.rows();
  Matrix out(n * c.rows(), n);
  Matrix blk = c;
  for (Index k = 0; k < n; ++k) {
    out.middleRows(k * c.rows(), c.rows()) = blk;
    blk = blk * a;
  }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), std::max(top.cols(), bottom.cols()));
  if (top.rows()) out.topRows(top.rows()) = top;
  if (bottom.rows()) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

double relative_kernel_tol(const Matrix& m, double rel) {
  return rel * std::max(opnorm(m), 1e-300);
}

double smallest_singular_value(const Matrix& m) {
  if (m.rows() < m.cols()) return 0.0;
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues().minCoeff();
}

Subspace restriction_or_full(const std::optional<Subspace>& r, Index n) {
  if (!r) return Subspace::full(n);
  if (r->ambient_dim != n) throw ShapeError("restriction subspace does not match the state dimension");
  return *r;
}

// Orthogonal complement of `inner` taken inside `outer`.
Subspace relative_complement(const Subspace& outer, const Subspace& inner) {
  if (inner.empty()) return outer;
  const Subspace coeffs = kernel(inner.basis.transpose() * outer.basis, 1e-8);
  return {outer.ambient_dim, outer.basis * coeffs.basis};
}

void fill_witnesses(GoalVerdict& v, const Subspace& s) {
  for (Index j = 0; j < s.rank(); ++j) v.witnesses.push_back(canonical_witness(s.basis.col(j)));
}

double witness_residual(const Matrix& stack, const std::vector<Vector>& ws) {
  double worst = 0.0;
  for (const auto& w : ws) worst = std::max(worst, (stack * w).norm());
  return worst;
}

double markov_residual(const StateSpaceModel& model, const PortList& inputs,
                       const PortList& outputs) {
  const Matrix a = model.A() / std::max(1.0, opnorm(model.A()));
  const Matrix c = model.C(outputs);
  Matrix blk = model.B(inputs);
  const Matrix d = model.D(outputs, inputs);
  double r = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  for (Index k = 0; k < model.states(); ++k) {
    const Matrix mk = c * blk;
    if (mk.size()) r = std::max(r, mk.cwiseAbs().maxCoeff());
    blk = a * blk;
  }
  return r;
}

}  // namespace

std::string to_string(Goal goal) {
  switch (goal) {
    case Goal::kBAE: return "bae";
    case Goal::kQND: return "qnd";
    case Goal::kDFS: return "dfs";
  }
  return "bae";
}

Goal parse_goal(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (l == "bae") return Goal::kBAE;
  if (l == "qnd") return Goal::kQND;
  if (l == "dfs") return Goal::kDFS;
  throw ValidationError("unknown goal '" + s + "' (expected bae, qnd or dfs)");
}

Subspace GoalVerdict::witness_space(Index ambient) const {
  Matrix b(ambient, static_cast<Index>(witnesses.size()));
  for (std::size_t j = 0; j < witnesses.size(); ++j) b.col(static_cast<Index>(j)) = witnesses[j];
  return range(b, 1e-10);
}

Vector canonical_witness(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  Vector out = v / n;
  for (Index i = 0; i < out.size(); ++i) {
    if (std::abs(out(i)) > 1e-12) {
      if (out(i) < 0) out = -out;
      break;
    }
  }
  for (Index i = 0; i < out.size(); ++i)
    if (out(i) == 0.0) out(i) = 0.0;  // drop negative zeros
  return out;
}

GoalVerdict check_bae(const StateSpaceModel& model, const PortList& ba_ports,
                      const PortList& outputs, const GoalOptions& opts) {
  const Matrix b = model.B(ba_ports);
  const Matrix c = model.C(outputs);
  const Matrix d = model.D(outputs, ba_ports);
  GoalVerdict v;
  v.goal = Goal::kBAE;
  v.tolerance = opts.rel_tolerance * opnorm(b) * opnorm(c);
  v.residual = markov_residual(model, ba_ports, outputs);
  v.markov_achieved = v.residual <= v.tolerance;

  const Subspace ctrl = controllable_subspace(model.A(), b, opts.krylov_tolerance);
  const Subspace obs = observable_subspace(model.A(), c, opts.krylov_tolerance);
  const double overlap =
      ctrl.empty() || obs.empty() ? 0.0 : opnorm(ctrl.basis.transpose() * obs.basis);
  const double d_max = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  v.geometric_achieved = overlap <= opts.geometric_tolerance && d_max <= v.tolerance;

  const TransferZeroCheck probe = transfer_zero_check(model, ba_ports, outputs, opts);
  v.achieved = v.markov_achieved;
  v.method_agreement =
      v.geometric_achieved == v.markov_achieved && probe.transfer_zero == v.markov_achieved;
  return v;
}

GoalVerdict find_qnd(const StateSpaceModel& model, const PortList& noise_ports,
                     const PortList& outputs, const std::optional<Subspace>& restrict_to,
                     const GoalOptions& opts) {
  const Index n = model.states();
  const Subspace r = restriction_or_full(restrict_to, n);
  const Matrix b = model.B(noise_ports);
  const Matrix c = model.C(outputs);

  GoalVerdict v;
  v.goal = Goal::kQND;
  v.tolerance = opts.kernel_tolerance;

  // Geometric route.
  const Subspace unctrl = complement(controllable_subspace(model.A(), b, opts.krylov_tolerance));
  const Subspace unobs = complement(observable_subspace(model.A(), c, opts.krylov_tolerance));
  const Subspace s = intersect(unctrl, r, opts.geometric_tolerance);
  const Subspace hidden = intersect(s, unobs, opts.geometric_tolerance);
  const Subspace w = relative_complement(s, hidden);
  v.geometric_dim = w.rank();
  v.geometric_achieved = w.rank() > 0;

  // Markov route.
  const Normalized nz = normalize(model.A(), b, c);
  const Matrix kc = vstack(uncontrollability_stack(nz.a, nz.b), complement(r).basis.transpose());
  const Matrix ko = unobservability_stack(nz.a, nz.c);
  const Subspace sm = kc.rows() ? kernel(kc, relative_kernel_tol(kc, opts.kernel_tolerance))
                                : Subspace::full(n);
  Index markov_dim = sm.rank();
  if (!sm.empty() && ko.rows()) {
    const Matrix restricted = ko * sm.basis;
    markov_dim -= kernel(restricted, relative_kernel_tol(ko, opts.kernel_tolerance)).rank();
  }
  v.markov_dim = markov_dim;
  v.markov_achieved = markov_dim > 0;

  fill_witnesses(v, w);
  v.residual = v.witnesses.empty() ? smallest_singular_value(kc) / std::max(opnorm(kc), 1e-300)
                                   : witness_residual(kc, v.witnesses);
  v.achieved = v.geometric_achieved;
  v.method_agreement =
      v.geometric_achieved == v.markov_achieved && v.geometric_dim == v.markov_dim;
  return v;
}

GoalVerdict find_dfs(const StateSpaceModel& model, const PortList& noise_ports,
                     const PortList& output_fields, const std::optional<Subspace>& restrict_to,
                     const GoalOptions& opts) {
  const Index n = model.states();
  const Subspace r = restriction_or_full(restrict_to, n);
  const Matrix b = model.B(noise_ports);
  const Matrix c = model.C(output_fields);

  GoalVerdict v;
  v.goal = Goal::kDFS;
  v.tolerance = opts.kernel_tolerance;

  const Subspace unctrl = complement(controllable_subspace(model.A(), b, opts.krylov_tolerance));
  const Subspace unobs = complement(observable_subspace(model.A(), c, opts.krylov_tolerance));
  const Subspace w =
      intersect(intersect(unctrl, unobs, opts.geometric_tolerance), r, opts.geometric_tolerance);
  v.geometric_dim = w.rank();
  v.geometric_achieved = w.rank() > 0;

  const Normalized nz = normalize(model.A(), b, c);
  const Matrix stack = vstack(vstack(uncontrollability_stack(nz.a, nz.b),
                                     unobservability_stack(nz.a, nz.c)),
                              complement(r).basis.transpose());
  const Subspace sm = stack.rows()
                          ? kernel(stack, relative_kernel_tol(stack, opts.kernel_tolerance))
                          : Subspace::full(n);
  v.markov_dim = sm.rank();
  v.markov_achieved = sm.rank() > 0;

  fill_witnesses(v, w);
  v.residual = v.witnesses.empty()
                   ? smallest_singular_value(stack) / std::max(opnorm(stack), 1e-300)
                   : witness_residual(stack, v.witnesses);
  v.achieved = v.geometric_achieved;
  v.method_agreement =
      v.geometric_achieved == v.markov_achieved && v.geometric_dim == v.markov_dim;
  return v;
}

TransferZeroCheck transfer_zero_check(const StateSpaceModel& model, const PortList& inputs,
                                      const PortList& outputs, const GoalOptions& opts,
                                      std::uint64_t seed) {
  const Matrix& a = model.A();
  const Matrix b = model.B(inputs);
  const Matrix c = model.C(outputs);
  const Index n = model.states();
  const double na = opnorm(a);

  TransferZeroCheck out;
  out.markov_residual = markov_residual(model, inputs, outputs);
  out.markov_tolerance = opts.rel_tolerance * opnorm(b) * opnorm(c);
  out.markov_zero = out.markov_residual <= out.markov_tolerance;
  out.gain_tolerance = opts.rel_tolerance * opnorm(c) * opnorm(b) / (na + 1.0);

  const Matrix d = model.D(outputs, inputs);
  const double d_max = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const double radius = 2.0 * na + 1.0;
  const CMatrix ac = a.cast<Complex>();
  const CMatrix bc = b.cast<Complex>();
  const CMatrix cc = c.cast<Complex>();
  for (int j = 0; j < 16; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + jitter(rng)) / 16.0;
    const Complex s = std::polar(radius, theta);
    if (n == 0 || b.cols() == 0 || c.rows() == 0) break;
    const CMatrix resolvent =
        (s * CMatrix::Identity(n, n) - ac).partialPivLu().solve(bc);
    const CMatrix xi = cc * resolvent;
    const double gain = Eigen::JacobiSVD<CMatrix>(xi).singularValues()(0);
    out.max_gain = std::max(out.max_gain, gain);
  }
  out.transfer_zero = out.max_gain <= out.gain_tolerance && d_max <= out.markov_tolerance;
  return out;
}

bool transfer_zero_equivalence(const StateSpaceModel& model, const PortList& inputs,
                               const PortList& outputs, const GoalOptions& opts) {
  return transfer_zero_check(model, inputs, outputs, opts).agree();
}

}  // namespace qlin
