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

#include "qlin/state_space.hpp"

#include <algorithm>

#include "qlin/errors.hpp"

namespace qlin {

StateSpaceModel::StateSpaceModel(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols())
    throw ShapeError("state-space: A must be square, got " + shape_str(a_));
}

StateSpaceModel StateSpaceModel::with_input(std::string name, Matrix b) const {
  if (b.rows() != states())
    throw ShapeError("state-space: input '" + name + "' has " +
                     std::to_string(b.rows()) + " rows, expected " +
                     std::to_string(states()));
  if (has_input(name)) throw ValidationError("duplicate input port '" + name + "'");
  StateSpaceModel out = *this;
  out.inputs_.push_back({std::move(name), std::move(b)});
  return out;
}

StateSpaceModel StateSpaceModel::with_output(std::string name, Matrix c) const {
  if (c.cols() != states())
    throw ShapeError("state-space: output '" + name + "' has " +
                     std::to_string(c.cols()) + " columns, expected " +
                     std::to_string(states()));
  if (has_output(name)) throw ValidationError("duplicate output port '" + name + "'");
  StateSpaceModel out = *this;
  out.outputs_.push_back({std::move(name), std::move(c)});
  return out;
}

StateSpaceModel StateSpaceModel::with_feedthrough(const std::string& output_name,
                                                  const std::string& input_name,
                                                  Matrix d) const {
  const auto& o = output(output_name);
  const auto& i = input(input_name);
  if (d.rows() != o.C.rows() || d.cols() != i.B.cols())
    throw ShapeError("state-space: feedthrough " + output_name + "<-" + input_name +
                     " is " + shape_str(d));
  StateSpaceModel out = *this;
  out.d_[{output_name, input_name}] = std::move(d);
  return out;
}

bool StateSpaceModel::has_input(const std::string& name) const {
  return std::any_of(inputs_.begin(), inputs_.end(),
                     [&](const InputPort& p) { return p.name == name; });
}

bool StateSpaceModel::has_output(const std::string& name) const {
  return std::any_of(outputs_.begin(), outputs_.end(),
                     [&](const OutputPort& p) { return p.name == name; });
}

const InputPort& StateSpaceModel::input(const std::string& name) const {
  for (const auto& p : inputs_)
    if (p.name == name) return p;
  throw LookupError("unknown input port '" + name + "'");
}

const OutputPort& StateSpaceModel::output(const std::string& name) const {
  for (const auto& p : outputs_)
    if (p.name == name) return p;
  throw LookupError("unknown output port '" + name + "'");
}

Index StateSpaceModel::input_width(const PortList& ports) const {
  Index w = 0;
  for (const auto& p : ports) w += input(p).B.cols();
  return w;
}

Index StateSpaceModel::output_width(const PortList& ports) const {
  Index w = 0;
  for (const auto& p : ports) w += output(p).C.rows();
  return w;
}

Matrix StateSpaceModel::B(const PortList& ports) const {
  Matrix out(states(), input_width(ports));
  Index col = 0;
  for (const auto& p : ports) {
    const Matrix& b = input(p).B;
    out.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return out;
}

Matrix StateSpaceModel::C(const PortList& ports) const {
  Matrix out(output_width(ports), states());
  Index row = 0;
  for (const auto& p : ports) {
    const Matrix& c = output(p).C;
    out.middleRows(row, c.rows()) = c;
    row += c.rows();
  }
  return out;
}

Matrix StateSpaceModel::D(const PortList& outs, const PortList& ins) const {
  Matrix out = Matrix::Zero(output_width(outs), input_width(ins));
  Index row = 0;
  for (const auto& o : outs) {
    const Index h = output(o).C.rows();
    Index col = 0;
    for (const auto& i : ins) {
      const Index w = input(i).B.cols();
      auto it = d_.find({o, i});
      if (it != d_.end()) out.block(row, col, h, w) = it->second;
      col += w;
    }
    row += h;
  }
  return out;
}

PortList StateSpaceModel::all_inputs() const {
  PortList names;
  for (const auto& p : inputs_) names.push_back(p.name);
  return names;
}

PortList StateSpaceModel::all_outputs() const {
  PortList names;
  for (const auto& p : outputs_) names.push_back(p.name);
  return names;
}

Matrix StateSpaceModel::B_all() const { return B(all_inputs()); }
Matrix StateSpaceModel::C_all() const { return C(all_outputs()); }
Matrix StateSpaceModel::D_all() const { return D(all_outputs(), all_inputs()); }

StateSpaceModel StateSpaceModel::transformed(const Matrix& t) const {
  if (t.rows() != states() || t.cols() != states())
    throw ShapeError("state-space: similarity transform is " + shape_str(t));
  Eigen::PartialPivLU<Matrix> lu(t);
  StateSpaceModel out(lu.solve(a_ * t));
  for (const auto& p : inputs_) out.inputs_.push_back({p.name, lu.solve(p.B)});
  for (const auto& p : outputs_) out.outputs_.push_back({p.name, p.C * t});
  out.d_ = d_;
  return out;
}

}  // namespace qlin
