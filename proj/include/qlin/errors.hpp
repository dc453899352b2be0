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

#include <stdexcept>
#include <string>

namespace qlin {

// Base of every error the library throws. The CLI maps ValidationError and
// its subclasses to exit code 2 and InconsistencyError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LookupError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A goal theorem was invoked on a plant that does not meet its hypothesis.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double eigen_re, double eigen_im)
      : Error(what), eigen_re_(eigen_re), eigen_im_(eigen_im) {}
  double eigen_re() const { return eigen_re_; }
  double eigen_im() const { return eigen_im_; }

 private:
  double eigen_re_;
  double eigen_im_;
};

// Two algebraically equivalent routes disagreed, or an internal identity that
// must hold by construction failed.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlin
