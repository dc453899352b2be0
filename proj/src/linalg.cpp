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

#include "qlin/linalg.hpp"

#include <algorithm>
#include <limits>

#include "qlin/errors.hpp"

namespace qlin {

SymplecticForm SymplecticForm::of(Index modes) {
  if (modes < 0) throw ShapeError("symplectic form: negative mode count");
  SymplecticForm s;
  s.n = modes;
  s.matrix = Matrix::Zero(2 * modes, 2 * modes);
  for (Index i = 0; i < modes; ++i) {
    s.matrix(2 * i, 2 * i + 1) = 1.0;
    s.matrix(2 * i + 1, 2 * i) = -1.0;
  }
  return s;
}

Matrix sigma(Index modes) { return SymplecticForm::of(modes).matrix; }

double opnorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix blkdiag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix vcat(const Matrix& top, const Matrix& bottom) {
  if (top.size() && bottom.size() && top.cols() != bottom.cols())
    throw ShapeError("vcat: column counts differ (" + shape_str(top) + " vs " +
                     shape_str(bottom) + ")");
  const Index cols = std::max(top.cols(), bottom.cols());
  Matrix out = Matrix::Zero(top.rows() + bottom.rows(), cols);
  if (top.size()) out.topRows(top.rows()) = top;
  if (bottom.size()) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

Matrix hcat(const Matrix& left, const Matrix& right) {
  return vcat(left.transpose(), right.transpose()).transpose();
}

Matrix block2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  return vcat(hcat(a, b), hcat(c, d));
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix out(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != c) throw ShapeError("mat: ragged rows");
    Index j = 0;
    for (double v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

Vector vec(std::initializer_list<double> values) {
  Vector out(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) out(i++) = v;
  return out;
}

Matrix real_rep(const CMatrix& z) {
  Matrix out(2 * z.rows(), 2 * z.cols());
  for (Index j = 0; j < z.rows(); ++j) {
    for (Index k = 0; k < z.cols(); ++k) {
      const double re = z(j, k).real();
      const double im = z(j, k).imag();
      out(2 * j, 2 * k) = re;
      out(2 * j, 2 * k + 1) = -im;
      out(2 * j + 1, 2 * k) = im;
      out(2 * j + 1, 2 * k + 1) = re;
    }
  }
  return out;
}

CMatrix complex_rep(const Matrix& r, double tol) {
  if (r.rows() % 2 != 0 || r.cols() % 2 != 0)
    throw ShapeError("complex_rep: odd dimensions " + shape_str(r));
  CMatrix out(r.rows() / 2, r.cols() / 2);
  for (Index j = 0; j < out.rows(); ++j) {
    for (Index k = 0; k < out.cols(); ++k) {
      const double re = r(2 * j, 2 * k);
      const double im = r(2 * j + 1, 2 * k);
      if (std::abs(r(2 * j + 1, 2 * k + 1) - re) > tol ||
          std::abs(r(2 * j, 2 * k + 1) + im) > tol) {
        throw ValidationError(
            "complex_rep: matrix mixes creation and annihilation operators");
      }
      out(j, k) = Complex(re, im);
    }
  }
  return out;
}

double default_rank_tol(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const double max_dim = static_cast<double>(std::max(m.rows(), m.cols()));
  return max_dim * std::numeric_limits<double>::epsilon() * opnorm(m);
}

Index rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

Index rank(const Matrix& m) { return rank(m, default_rank_tol(m)); }

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace qlin
