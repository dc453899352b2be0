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

#include "qlin/core_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qlin/errors.hpp"

namespace qlin {
namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

double snap(double x) {
  return std::abs(x) < 4.0 * std::numeric_limits<double>::epsilon() ? 0.0 : x;
}

}  // namespace

std::string to_string(ChannelRole role) {
  switch (role) {
    case ChannelRole::kFeedback: return "feedback";
    case ChannelRole::kEvaluation: return "evaluation";
    case ChannelRole::kEnvironment: return "environment";
  }
  return "feedback";
}

ChannelRole parse_channel_role(const std::string& s) {
  if (s == "feedback") return ChannelRole::kFeedback;
  if (s == "evaluation") return ChannelRole::kEvaluation;
  if (s == "environment") return ChannelRole::kEnvironment;
  throw ValidationError("unknown channel role '" + s + "'");
}

Index QuantumLinearSystem::channel_index(const std::string& label) const {
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (channels_[i].label == label) return static_cast<Index>(i);
  throw LookupError("unknown channel '" + label + "'");
}

std::vector<Index> QuantumLinearSystem::channels_with_role(ChannelRole role) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (channels_[i].role == role) out.push_back(static_cast<Index>(i));
  return out;
}

Matrix QuantumLinearSystem::coupling_rows(const std::vector<Index>& chans) const {
  Matrix out(2 * static_cast<Index>(chans.size()), c_.cols());
  for (std::size_t k = 0; k < chans.size(); ++k) {
    if (chans[k] < 0 || chans[k] >= channel_count())
      throw LookupError("channel index out of range");
    out.middleRows(2 * static_cast<Index>(k), 2) = c_.middleRows(2 * chans[k], 2);
  }
  return out;
}

double QuantumLinearSystem::realizability_defect() const {
  const Matrix sn = sigma(modes());
  const Matrix sm = sigma(channel_count());
  const Matrix h = sn.transpose() * a_ - c_.transpose() * sm * c_ / 2.0;
  if (h.size() == 0) return 0.0;
  return (h - h.transpose()).cwiseAbs().maxCoeff();
}

QuantumLinearSystem build_system(Matrix g, Matrix c, std::vector<Channel> channels,
                                 std::optional<Vector> force,
                                 std::vector<std::string> mode_labels) {
  if (g.rows() != g.cols()) throw ShapeError("G must be square, got " + shape_str(g));
  if (g.rows() % 2 != 0) throw ShapeError("G must be 2n x 2n, got " + shape_str(g));
  if (c.cols() != g.cols())
    throw ShapeError("C must have " + std::to_string(g.cols()) + " columns, got " +
                     shape_str(c));
  if (c.rows() % 2 != 0) throw ShapeError("C must have an even row count, got " + shape_str(c));
  require_finite(g, "G");
  require_finite(c, "C");

  const double scale = g.size() == 0 ? 0.0 : g.cwiseAbs().maxCoeff();
  const double asym = g.size() == 0 ? 0.0 : (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw ValidationError("G is not symmetric (max |G - G^T| = " + std::to_string(asym) + ")");
  g = (g + g.transpose()).eval() / 2.0;

  const Index n = g.rows() / 2;
  const Index m = c.rows() / 2;
  if (channels.empty()) {
    for (Index j = 0; j < m; ++j) channels.push_back({"W" + std::to_string(j + 1), ChannelRole::kFeedback, std::nullopt});
  }
  if (static_cast<Index>(channels.size()) != m)
    throw ShapeError("channel list has " + std::to_string(channels.size()) +
                     " entries, C describes " + std::to_string(m));
  for (std::size_t i = 0; i < channels.size(); ++i)
    for (std::size_t j = i + 1; j < channels.size(); ++j)
      if (channels[i].label == channels[j].label)
        throw ValidationError("duplicate channel label '" + channels[i].label + "'");
  if (force) {
    if (force->size() != 2 * n)
      throw ShapeError("force vector must have length " + std::to_string(2 * n));
    if (!force->allFinite()) throw ValidationError("force has non-finite entries");
  }
  if (mode_labels.empty()) {
    for (Index i = 0; i < n; ++i) mode_labels.push_back("a" + std::to_string(i + 1));
  }
  if (static_cast<Index>(mode_labels.size()) != n)
    throw ShapeError("mode_labels must have " + std::to_string(n) + " entries");

  QuantumLinearSystem sys;
  const Matrix sn = sigma(n);
  const Matrix sm = sigma(m);
  sys.a_ = sn * (g + c.transpose() * sm * c / 2.0);
  sys.b_ = sn * c.transpose() * sm;
  sys.g_ = std::move(g);
  sys.c_ = std::move(c);
  sys.channels_ = std::move(channels);
  sys.force_ = std::move(force);
  sys.mode_labels_ = std::move(mode_labels);
  const double defect = sys.realizability_defect();
  if (defect > 1e-12 * std::max(1.0, sys.a_.size() ? sys.a_.cwiseAbs().maxCoeff() : 0.0))
    throw InconsistencyError("assembled drift fails the realizability identity");
  return sys;
}

double MeasurementSplit::defect() const {
  const Matrix s = sigma(m);
  const Matrix id = Matrix::Identity(m, m);
  double worst = 0.0;
  auto upd = [&](const Matrix& x) {
    if (x.size()) worst = std::max(worst, x.cwiseAbs().maxCoeff());
  };
  upd(M1 * s * M1.transpose());
  upd(M1 * M1.transpose() - id);
  upd(M2 * s * M2.transpose());
  upd(M2 * M2.transpose() - id);
  upd(M1 * s * M2.transpose() - id);
  upd(M1 * M2.transpose());
  upd(M1.transpose() * M1 + M2.transpose() * M2 - Matrix::Identity(2 * m, 2 * m));
  return worst;
}

void MeasurementSplit::validate() const {
  if (M1.rows() != m || M2.rows() != m || M1.cols() != 2 * m || M2.cols() != 2 * m)
    throw ShapeError("measurement split must be m x 2m");
  if (defect() > 1e-12 * static_cast<double>(std::max<Index>(m, 1)))
    throw ValidationError("measurement split violates the symplectic/orthogonal conditions");
}

Matrix MeasurementSplit::stacked() const {
  Matrix out(2 * m, 2 * m);
  out << M1, M2;
  return out;
}

MeasurementSplit homodyne_split(const std::vector<Quadrature>& selectors) {
  std::vector<double> angles;
  for (auto q : selectors) angles.push_back(q == Quadrature::kQ ? 0.0 : std::numbers::pi / 2);
  return homodyne_split(angles);
}

MeasurementSplit homodyne_split(const std::vector<double>& angles) {
  const Index m = static_cast<Index>(angles.size());
  MeasurementSplit s{m, Matrix::Zero(m, 2 * m), Matrix::Zero(m, 2 * m)};
  for (Index j = 0; j < m; ++j) {
    const double c = snap(std::cos(angles[j]));
    const double sn = snap(std::sin(angles[j]));
    s.M1(j, 2 * j) = c;
    s.M1(j, 2 * j + 1) = sn;
    s.M2(j, 2 * j) = -sn;
    s.M2(j, 2 * j + 1) = c;
  }
  s.validate();
  return s;
}

MeasurementSplit split_from_symplectic(const Matrix& mm) {
  if (mm.rows() != mm.cols() || mm.rows() % 2 != 0)
    throw ShapeError("symplectic matrix must be 2m x 2m");
  const Index m = mm.rows() / 2;
  MeasurementSplit s{m, Matrix(m, 2 * m), Matrix(m, 2 * m)};
  for (Index j = 0; j < m; ++j) {
    s.M1.row(j) = mm.row(2 * j);
    s.M2.row(j) = mm.row(2 * j + 1);
  }
  s.validate();
  return s;
}

QuantumLinearSystem augment_with_vacuum(const QuantumLinearSystem& sys,
                                        Index extra_channels) {
  if (extra_channels < 0) throw DomainError("extra_channels must be non-negative");
  if (extra_channels == 0) return sys;
  Matrix c = Matrix::Zero(sys.C().rows() + 2 * extra_channels, sys.C().cols());
  c.topRows(sys.C().rows()) = sys.C();
  auto channels = sys.channels();
  for (Index j = 0; j < extra_channels; ++j)
    channels.push_back({"V" + std::to_string(j + 1), ChannelRole::kEnvironment, std::nullopt});
  return build_system(sys.G(), std::move(c), std::move(channels), sys.force(),
                      sys.mode_labels());
}

QuantumLinearSystem complex_to_quadrature(const CMatrix& drift,
                                          const std::vector<CVector>& couplings) {
  if (drift.rows() != drift.cols()) throw ShapeError("complex drift must be square");
  const Index n = drift.rows();
  CMatrix k(static_cast<Index>(couplings.size()), n);
  for (std::size_t j = 0; j < couplings.size(); ++j) {
    if (couplings[j].size() != n) throw ShapeError("coupling row has wrong length");
    k.row(static_cast<Index>(j)) = couplings[j].transpose();
  }
  const Matrix a = real_rep(drift);
  const Matrix c = real_rep(k);
  const Matrix g = sigma(n).transpose() * a - c.transpose() * sigma(k.rows()) * c / 2.0;
  const double scale = std::max(1.0, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
  if (g.size() && (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("complex description is not physically realizable");
  return build_system((g + g.transpose()) / 2.0, c);
}

ComplexDescription quadrature_to_complex(const QuantumLinearSystem& sys) {
  const double tol = 1e-12 * std::max(1.0, sys.drift().size() ? sys.drift().cwiseAbs().maxCoeff() : 0.0);
  ComplexDescription out;
  out.drift = complex_rep(sys.drift(), tol);
  const CMatrix k = complex_rep(sys.C(), tol);
  for (Index j = 0; j < k.rows(); ++j) out.couplings.push_back(k.row(j).transpose());
  return out;
}

std::optional<Measurement> default_measurement(const QuantumLinearSystem& sys) {
  std::vector<Index> chans;
  std::vector<double> angles;
  for (std::size_t i = 0; i < sys.channels().size(); ++i) {
    if (const auto& a = sys.channels()[i].homodyne_angle) {
      chans.push_back(static_cast<Index>(i));
      angles.push_back(*a);
    }
  }
  if (chans.empty()) return std::nullopt;
  return Measurement{chans, homodyne_split(angles)};
}

StateSpaceModel to_state_space(const QuantumLinearSystem& sys,
                               const std::optional<Measurement>& meas) {
  const Index m = sys.channel_count();
  const Matrix& b = sys.noise_input();
  StateSpaceModel model(sys.drift());
  model = model.with_input("W", b).with_output("Wout", sys.C());
  model = model.with_feedthrough("Wout", "W", Matrix::Identity(2 * m, 2 * m));
  for (Index j = 0; j < m; ++j) {
    const std::string& label = sys.channels()[j].label;
    Matrix embed = Matrix::Zero(2 * m, 2);
    embed.middleRows(2 * j, 2) = Matrix::Identity(2, 2);
    model = model.with_input(label, b * embed)
                .with_output(label + "out", sys.C().middleRows(2 * j, 2))
                .with_feedthrough(label + "out", label, Matrix::Identity(2, 2))
                .with_feedthrough("Wout", label, embed)
                .with_feedthrough(label + "out", "W", embed.transpose());
  }
  if (sys.force()) model = model.with_input("F", *sys.force());
  if (meas) {
    const auto& split = meas->split;
    split.validate();
    if (split.m != static_cast<Index>(meas->channels.size()))
      throw ShapeError("measurement split width does not match the measured channels");
    Matrix select = Matrix::Zero(2 * split.m, 2 * m);  // W_sel = select * W
    for (std::size_t k = 0; k < meas->channels.size(); ++k) {
      const Index j = meas->channels[k];
      if (j < 0 || j >= m) throw LookupError("measured channel out of range");
      select.block(2 * static_cast<Index>(k), 2 * j, 2, 2) = Matrix::Identity(2, 2);
    }
    const Matrix q_embed = select.transpose() * split.M1.transpose();
    const Matrix p_embed = select.transpose() * split.M2.transpose();
    model = model.with_input("Q", b * q_embed)
                .with_input("P", b * p_embed)
                .with_output("y", split.M1 * select * sys.C())
                .with_feedthrough("y", "Q", Matrix::Identity(split.m, split.m))
                .with_feedthrough("y", "W", split.M1 * select)
                .with_feedthrough("Wout", "Q", q_embed)
                .with_feedthrough("Wout", "P", p_embed);
    for (Index j = 0; j < m; ++j) {
      const std::string& label = sys.channels()[j].label;
      Matrix embed = Matrix::Zero(2 * m, 2);
      embed.middleRows(2 * j, 2) = Matrix::Identity(2, 2);
      model = model.with_feedthrough("y", label, split.M1 * select * embed);
    }
  }
  return model;
}

}  // namespace qlin
