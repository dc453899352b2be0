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

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <string>

namespace qlin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Block-diagonal skew form diag(σ, ..., σ) with σ = [[0, 1], [-1, 0]],
/// encoding the CCR of n modes in interleaved (q1, p1, q2, p2, ...) order.
struct SymplecticForm {
  Index n = 0;
  Matrix matrix;

  static SymplecticForm of(Index modes);
};

/// Shorthand for SymplecticForm::of(modes).matrix.
Matrix sigma(Index modes);

/// Largest singular value; 0 for empty matrices.
double opnorm(const Matrix& m);

Matrix blkdiag(const Matrix& a, const Matrix& b);

/// Block concatenation; empty operands contribute nothing.
Matrix vcat(const Matrix& top, const Matrix& bottom);
Matrix hcat(const Matrix& left, const Matrix& right);
/// [[a, b], [c, d]].
Matrix block2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

/// Row-major literal, e.g. mat({{0, 1}, {-1, 0}}).
Matrix mat(std::initializer_list<std::initializer_list<double>> rows);
Vector vec(std::initializer_list<double> values);

/// Real 2n x 2n representation (interleaved quadratures) of a complex n x n
/// map acting on annihilation operators a = (q + i p) / sqrt(2).
Matrix real_rep(const CMatrix& z);

/// Inverse of real_rep. Throws ValidationError when the matrix does not have
/// the [[re, -im], [im, re]] block structure to tolerance `tol` (absolute).
CMatrix complex_rep(const Matrix& r, double tol);

/// Default rank threshold: max_dim * eps * sigma_max.
double default_rank_tol(const Matrix& m);

/// Numerical rank with an explicit threshold (sigma > tol counts).
Index rank(const Matrix& m, double tol);
Index rank(const Matrix& m);

std::string shape_str(const Matrix& m);

}  // namespace qlin
