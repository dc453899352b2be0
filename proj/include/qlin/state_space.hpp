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
#include <utility>
#include <vector>

#include "qlin/linalg.hpp"

namespace qlin {

using PortList = std::vector<std::string>;

struct InputPort {
  std::string name;
  Matrix B;  // states x width
};

struct OutputPort {
  std::string name;
  Matrix C;  // width x states
};

/// Generic (A, B, C, D) realization whose input and output maps are split
/// into named ports. Several input ports may parametrize the same physical
/// noise differently (for example "W" and its quadrature split "Q"/"P");
/// analyses always name the ports they use, so the registry never mixes them.
class StateSpaceModel {
 public:
  StateSpaceModel() = default;
  explicit StateSpaceModel(Matrix a);

  Index states() const { return a_.rows(); }
  const Matrix& A() const { return a_; }

  StateSpaceModel with_input(std::string name, Matrix b) const;
  StateSpaceModel with_output(std::string name, Matrix c) const;
  StateSpaceModel with_feedthrough(const std::string& output,
                                   const std::string& input, Matrix d) const;

  bool has_input(const std::string& name) const;
  bool has_output(const std::string& name) const;
  const InputPort& input(const std::string& name) const;
  const OutputPort& output(const std::string& name) const;
  const std::vector<InputPort>& inputs() const { return inputs_; }
  const std::vector<OutputPort>& outputs() const { return outputs_; }

  Index input_width(const PortList& ports) const;
  Index output_width(const PortList& ports) const;

  /// Column blocks of the named inputs, concatenated in the given order.
  Matrix B(const PortList& ports) const;
  /// Row blocks of the named outputs, stacked in the given order.
  Matrix C(const PortList& ports) const;
  /// Direct term between the named port groups; zero where unregistered.
  Matrix D(const PortList& outputs, const PortList& inputs) const;

  /// Whole-registry matrices in registration order.
  Matrix B_all() const;
  Matrix C_all() const;
  Matrix D_all() const;

  /// Realization in coordinates x' = T^{-1} x.
  StateSpaceModel transformed(const Matrix& t) const;

  const std::map<std::pair<std::string, std::string>, Matrix>& feedthrough()
      const {
    return d_;
  }

 private:
  PortList all_inputs() const;
  PortList all_outputs() const;

  Matrix a_;
  std::vector<InputPort> inputs_;
  std::vector<OutputPort> outputs_;
  std::map<std::pair<std::string, std::string>, Matrix> d_;
};

}  // namespace qlin
