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

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "unitrans/errors.hpp"

namespace unitrans {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/** Named tensor factor. Valid names: P, I<j>, O<j>, F, AUX<n> (j >= 1, n >= 0). */
struct SpaceLabel {
  std::string name;
  int dim = 1;

  bool operator==(const SpaceLabel&) const = default;
};

/** Strict weak order P < I1 < I2 < ... < O1 < ... < F < AUX0 < AUX1 < ... */
bool canonical_less(const std::string& a, const std::string& b);
void check_label_name(const std::string& name);

/**
 * Square complex matrix over an ordered list of named factors.
 * Labels are always kept in canonical order; the constructor permutes the
 * matrix when given another order.
 */
class LabeledOperator {
 public:
  LabeledOperator() = default;
  LabeledOperator(std::vector<SpaceLabel> labels, CMatrix m);

  static LabeledOperator identity(std::vector<SpaceLabel> labels);
  static LabeledOperator zero(std::vector<SpaceLabel> labels);

  const std::vector<SpaceLabel>& labels() const { return labels_; }
  const CMatrix& matrix() const { return m_; }
  std::vector<int> dims() const;
  std::vector<std::string> names() const;
  Eigen::Index dim() const { return m_.rows(); }

  bool has_label(const std::string& name) const;
  int index_of(const std::string& name) const;  // throws on unknown
  int dim_of(const std::string& name) const;

  cplx trace() const { return m_.trace(); }
  LabeledOperator adjoint() const;
  LabeledOperator conjugate() const;
  LabeledOperator real_part() const;
  double hermiticity_residual() const;
  double min_eigenvalue() const;  // of the Hermitian part

  LabeledOperator& operator+=(const LabeledOperator& o);
  LabeledOperator& operator-=(const LabeledOperator& o);
  LabeledOperator& operator*=(cplx s);

  // Matrix product on identical label lists.
  LabeledOperator compose(const LabeledOperator& o) const;

  bool same_labels(const LabeledOperator& o) const { return labels_ == o.labels_; }
  // Max-abs entry difference; throws if labels differ.
  double distance(const LabeledOperator& o) const;

 private:
  std::vector<SpaceLabel> labels_;
  CMatrix m_;
};

LabeledOperator operator+(LabeledOperator a, const LabeledOperator& b);
LabeledOperator operator-(LabeledOperator a, const LabeledOperator& b);
LabeledOperator operator*(cplx s, LabeledOperator a);

/** Vector over named factors (e.g. Choi vectors, pure probes), canonical order. */
struct LabeledVector {
  std::vector<SpaceLabel> labels;
  CVector v;

  LabeledVector() = default;
  LabeledVector(std::vector<SpaceLabel> labels, CVector v);
  LabeledOperator projector() const;  // |v><v|
};

/** d x d matrix in SU(d): unitary to 1e-12, determinant 1 to 1e-10. */
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix u);
  const CMatrix& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }

 private:
  CMatrix u_;
};

/** |U>> = sum_i |i> (x) U|i>; entry i*d + j equals U(j, i). */
CVector choi_vector(const CMatrix& u);
LabeledVector choi_vector(const CMatrix& u, const std::string& in,
                          const std::string& out);
/** |U>><<U| over (in, out). */
LabeledOperator choi_of_unitary(const CMatrix& u, const std::string& in = "I1",
                                const std::string& out = "O1");

LabeledOperator partial_trace(const LabeledOperator& a,
                              const std::vector<std::string>& subset);
LabeledOperator partial_transpose(const LabeledOperator& a,
                                  const std::vector<std::string>& subset);
/** tr_X(A) (x) 1_X / d_X, kept on the original labels. */
LabeledOperator trace_and_replace(const LabeledOperator& a,
                                  const std::vector<std::string>& subset);
/** A (x) B on disjoint labels. */
LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b);
LabeledVector tensor(const LabeledVector& a, const LabeledVector& b);
/** A (x) 1 on the extra labels. */
LabeledOperator embed(const LabeledOperator& a,
                      const std::vector<SpaceLabel>& extra);
/** Rename factors; names not in the map are kept. */
LabeledOperator relabel(const LabeledOperator& a,
                        const std::map<std::string, std::string>& rename);
LabeledVector relabel(const LabeledVector& a,
                      const std::map<std::string, std::string>& rename);
/** Link product: shared labels are contracted, the rest tensored. */
LabeledOperator link_product(const LabeledOperator& a, const LabeledOperator& b);

// Helpers for names of the standard factor sets.
std::vector<std::string> input_names(int k);
std::vector<std::string> output_names(int k);
std::vector<SpaceLabel> superchannel_labels(int d, int k);

}  // namespace unitrans
