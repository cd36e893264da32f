// Copyright 2026 The unitrans Authors
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

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace unitrans {

using QVector = std::vector<mpq_class>;

/** Dense row-major matrix of rationals. */
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpq_class& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const mpq_class& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<mpq_class> a_;
};

/** Nearest fraction with the given denominator. */
mpq_class round_to_denominator(double x, long denominator);

/** Exact solve of a square system; nullopt when singular. */
std::optional<QVector> solve_exact(QMatrix a, QVector b);

/**
 * Exact PSD test of a symmetric rational matrix: fraction-free symmetric
 * elimination with largest-diagonal pivoting.
 */
bool is_psd_exact(const QMatrix& a);

mpq_class dot(const QVector& a, const QVector& b);

/** "num/den" with den omitted when 1. */
std::string to_fraction_string(const mpq_class& q);
mpq_class parse_fraction(const std::string& s);

}  // namespace unitrans
