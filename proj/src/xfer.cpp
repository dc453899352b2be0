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

#include "qlin/xfer.hpp"

#include <cmath>
#include <limits>

#include "qlin/errors.hpp"
#include "qlin/structural.hpp"

namespace qlin {

namespace {

// Keeps only the modes both reachable from `inputs` and visible in `outputs`,
// so marginal modes outside the path do not block evaluation.
StateSpaceModel minimal_realization(const StateSpaceModel& model, const PortList& inputs,
                                    const PortList& outputs) {
  const Matrix reach = controllable_subspace(model.A(), model.B(inputs)).basis;
  const Matrix a1 = reach.transpose() * model.A() * reach;
  const Matrix c1 = model.C(outputs) * reach;
  const Matrix basis = reach * observable_subspace(a1, c1).basis;
  StateSpaceModel out(basis.transpose() * model.A() * basis);
  for (const auto& p : inputs) out = out.with_input(p, basis.transpose() * model.input(p).B);
  for (const auto& p : outputs) out = out.with_output(p, model.output(p).C * basis);
  for (const auto& o : outputs)
    for (const auto& i : inputs) out = out.with_feedthrough(o, i, model.D({o}, {i}));
  return out;
}

}  // namespace

TransferFunction transfer_function(const StateSpaceModel& model, PortList inputs,
                                   PortList outputs) {
  for (const auto& p : inputs) (void)model.input(p);
  for (const auto& p : outputs) (void)model.output(p);
  return {minimal_realization(model, inputs, outputs), std::move(inputs), std::move(outputs)};
}

CMatrix evaluate(const TransferFunction& tf, Complex s) {
  const StateSpaceModel& m = tf.realization;
  const Index n = m.states();
  const CMatrix d = m.D(tf.outputs, tf.inputs).cast<Complex>();
  if (n == 0) return d;
  const CMatrix pencil = s * CMatrix::Identity(n, n) - m.A().cast<Complex>();
  const Eigen::JacobiSVD<CMatrix> svd(pencil);
  const auto& sv = svd.singularValues();
  const double cond = sv(n - 1) > 0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
  if (cond > 1e12) {
    const Eigen::ComplexEigenSolver<CMatrix> es(m.A().cast<Complex>(), false);
    Complex nearest = es.eigenvalues()(0);
    for (Index i = 1; i < n; ++i)
      if (std::abs(es.eigenvalues()(i) - s) < std::abs(nearest - s)) nearest = es.eigenvalues()(i);
    throw SingularityError("evaluation point is too close to an eigenvalue of A", nearest.real(),
                           nearest.imag());
  }
  const CMatrix x = pencil.partialPivLu().solve(m.B(tf.inputs).cast<Complex>());
  return m.C(tf.outputs).cast<Complex>() * x + d;
}

NoiseVariances vacuum_variances(const StateSpaceModel& model, const PortList& ports) {
  NoiseVariances v;
  for (const auto& p : ports) v[p] = Vector::Constant(model.input(p).B.cols(), 0.5);
  return v;
}

void apply_squeezing(NoiseVariances& v, const std::string& port, double r) {
  auto it = v.find(port);
  if (it == v.end()) throw LookupError("cannot squeeze unknown noise port '" + port + "'");
  const double lo = std::exp(-2.0 * r) / 2.0;
  const double hi = std::exp(2.0 * r) / 2.0;
  Vector& var = it->second;
  if (var.size() == 2) {
    var << lo, hi;
    return;
  }
  if (var.size() != 1 || (port != "Q" && port != "P"))
    throw ValidationError("squeezing applies to Q, P or a single channel port, got '" + port + "'");
  var(0) = lo;
  const std::string conj = port == "Q" ? "P" : "Q";
  if (auto c = v.find(conj); c != v.end() && c->second.size() == 1) c->second(0) = hi;
}

double noise_power(const StateSpaceModel& model, const std::string& output,
                   const NoiseVariances& variances, double omega) {
  if (model.output(output).C.rows() != 1)
    throw ShapeError("noise power needs a single-row output, '" + output + "' has " +
                     std::to_string(model.output(output).C.rows()));
  double s = 0.0;
  for (const auto& [port, var] : variances) {
    const TransferFunction tf = transfer_function(model, {port}, {output});
    const CMatrix xi = evaluate(tf, Complex(0.0, omega));
    if (xi.cols() != var.size())
      throw ShapeError("variance vector for port '" + port + "' has the wrong length");
    for (Index j = 0; j < var.size(); ++j) s += std::norm(xi(0, j)) * var(j);
  }
  return s;
}

double sql_value(double m, double L, double omega) {
  if (!(m > 0) || !(L > 0)) throw DomainError("mass and length must be positive");
  if (omega == 0.0) throw DomainError("the standard quantum limit diverges at omega = 0");
  return 1.0 / (2.0 * m * L * L * omega * omega);
}

SpectrumCurve sql_curve(double m, double L, const std::vector<double>& omegas) {
  SpectrumCurve c;
  c.omegas = omegas;
  for (double w : omegas) c.values.push_back(sql_value(m, L, w));
  return c;
}

std::vector<double> logspace(double lo, double hi, int points) {
  if (points < 1) throw DomainError("need at least one grid point");
  if (!(lo > 0) || !(hi > 0)) throw DomainError("log grid bounds must be positive");
  std::vector<double> out;
  if (points == 1) return {lo};
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
  return out;
}

Complex StrainReferredSignal::raw_gain(double omega) const {
  const TransferFunction tf = transfer_function(model, {force_port}, {output});
  const CMatrix xi = evaluate(tf, Complex(0.0, omega));
  return -mass * length * omega * omega * xi(0, 0);
}

Complex StrainReferredSignal::gain(double omega) const {
  if (referral == StrainReferral::kExact) return 1.0;
  return raw_gain(omega) / (2.0 * std::sqrt(lambda) * length);
}

double StrainReferredSignal::noise_power(const NoiseVariances& variances, double omega) const {
  const double raw = qlin::noise_power(model, output, variances, omega);
  const double scale = referral == StrainReferral::kExact
                           ? std::norm(raw_gain(omega))
                           : 4.0 * lambda * length * length;
  if (scale == 0.0) throw SingularityError("the signal path has zero gain at this frequency", 0, omega);
  return raw / scale;
}

SpectrumCurve StrainReferredSignal::spectrum(const NoiseVariances& variances,
                                             const std::vector<double>& omegas) const {
  SpectrumCurve c;
  c.omegas = omegas;
  c.variances = variances;
  for (double w : omegas) c.values.push_back(noise_power(variances, w));
  return c;
}

StrainReferredSignal normalized_gw_signal(const StateSpaceModel& model, const std::string& output,
                                          double lambda, double length, double mass,
                                          StrainReferral referral, const std::string& force_port) {
  if (!model.has_input(force_port))
    throw LookupError("model has no force port '" + force_port + "'");
  if (model.input(force_port).B.cols() != 1) throw ShapeError("force port must be one column");
  (void)model.output(output);
  if (!(mass > 0) || !(length > 0) || !(lambda >= 0))
    throw DomainError("mass and length must be positive, lambda non-negative");
  return {model, output, force_port, mass, length, lambda, referral};
}

}  // namespace qlin
