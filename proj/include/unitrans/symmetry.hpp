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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unitrans/groups.hpp"
#include "unitrans/perfop.hpp"
#include "unitrans/tensor.hpp"

namespace unitrans {

using IMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/** SU(d) acting on the listed factors, complex-conjugated where flagged. */
struct GroupAction {
  std::vector<std::string> labels;
  std::vector<bool> conjugated;
};

/**
 * The two independent SU(d) actions leaving the task's Omega invariant.
 * Twirling over both maps every cone into itself and keeps tr(S Omega).
 */
std::pair<GroupAction, GroupAction> task_symmetry(Task t, int k);

/** Commutant of one action, spanned by partially transposed permutations. */
struct FactorAlgebra {
  GroupAction action;
  int d = 0;
  std::vector<Permutation> perms;
  std::vector<IMatrix> elements;  // over action.labels in listed order; identity first
  IMatrix gram;                   // tr(Q_a^T Q_c)
  IMatrix gram_plain;             // tr(Q_a Q_c)
  std::vector<IMatrix> triple;    // triple[a](c, e) = tr(Q_c^T Q_a Q_e)

  int size() const { return static_cast<int>(elements.size()); }
};

/** Independent spanning elements picked exactly, in lexicographic order. */
FactorAlgebra factor_algebra(int d, const GroupAction& action);

/**
 * Real symmetric operators on P, I.., O.., F invariant under both task
 * actions. Product basis E_ab = Q_a (x) P_b; symmetric basis B_j = E + E^T
 * over an exactly independent subset, with B_0 = 2 * identity.
 *
 * PSD test: for symmetric X = sum_j w_j B_j the r x r matrix
 * K(X)[c, e] = tr(E_c^T X E_e) is PSD iff X is, and
 * G^{-1/2} K(X) G^{-1/2} has the same eigenvalues as X (G the product Gram).
 */
class InvariantAlgebra {
 public:
  explicit InvariantAlgebra(TaskSpec task);

  const TaskSpec& task() const { return task_; }
  int dim() const { return n_; }  // side of the full operator
  const FactorAlgebra& first() const { return a1_; }
  const FactorAlgebra& second() const { return a2_; }
  int product_size() const { return a1_.size() * a2_.size(); }
  int symmetric_size() const { return static_cast<int>(sym_.size()); }
  std::pair<int, int> symmetric_index(int j) const { return sym_[j]; }

  /** E_ab over the canonical superchannel labels. */
  IMatrix product_element(int a, int b) const;
  /** B_j over the canonical superchannel labels. */
  IMatrix symmetric_element(int j) const;

  /** tr(B_i B_j), exact. */
  const IMatrix& symmetric_gram() const { return gs_; }
  /** K(B_j), exact r x r. */
  IMatrix regular(int j) const;
  /** K(identity) = product Gram, exact. */
  IMatrix regular_identity() const;
  /** G^{-1/2} K(B_j) G^{-1/2}. */
  const Eigen::MatrixXd& lmi_block(int j) const { return lmi_[j]; }
  Eigen::MatrixXd lmi(const Eigen::VectorXd& w) const;

  /** Coordinates of the projection of a real symmetric S onto span{B_j}. */
  Eigen::VectorXd symmetric_coordinates(const Eigen::MatrixXd& s) const;
  /** Orthogonal projection of any operator onto the algebra (the group twirl). */
  CMatrix twirl(const CMatrix& s) const;
  Eigen::MatrixXd assemble(const Eigen::VectorXd& w) const;

 private:
  IMatrix to_canonical(const IMatrix& m) const;

  TaskSpec task_;
  int n_ = 0;
  FactorAlgebra a1_, a2_;
  std::vector<int> order_;  // canonical factor t = (A labels, B labels)[order_[t]]
  std::vector<std::pair<int, int>> sym_;
  IMatrix gs_;
  Eigen::MatrixXd gh_inv_sqrt_;
  std::vector<Eigen::MatrixXd> lmi_;
};

}  // namespace unitrans
