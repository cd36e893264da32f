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
#include <vector>

#include "unitrans/tensor.hpp"

namespace unitrans {

/** One-line permutation of {0..n-1}: position i maps to image[i]. */
class Permutation {
 public:
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);
  // 1-based cycle, e.g. {1,2,3} is the cycle 1->2->3->1.
  static Permutation cycle(int n, const std::vector<int>& one_based);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i]; }
  const std::vector<int>& image() const { return image_; }
  Permutation inverse() const;
  // (this o other)(i) = this(other(i))
  Permutation compose(const Permutation& other) const;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/** All n! permutations in lexicographic order of the one-line form. */
std::vector<Permutation> all_permutations(int n);

/** Factor names AUX0..AUX<n-1> used for bare commutant elements. */
std::vector<SpaceLabel> generic_labels(int d, int n);

/** V_pi |i_1..i_n> = |i_{pi^-1(1)} .. i_{pi^-1(n)}>, labelled AUX0..AUX<n-1>. */
LabeledOperator permutation_operator(const Permutation& pi, int d, int n);

/**
 * Integer matrix of V_pi with a partial transpose on the factors flagged in
 * `transposed`. These span the commutant of U^(x)n with U replaced by U* on
 * the flagged factors.
 */
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>
partially_transposed_permutation(const Permutation& pi, int d,
                                 const std::vector<bool>& transposed);

/** Haar-random element of SU(d), reproducible from the seed. */
UnitaryMatrix haar_unitary(int d, std::uint64_t seed);

enum class GroupKind { collective, conjugate_collective, mixed, custom };

struct GroupTag {
  GroupKind kind = GroupKind::custom;
  int d = 0;
  int n = 0;
  std::vector<bool> conjugated;  // per factor: U* instead of U
};

/** Orthogonal basis of a commutant with norms d_i = tr(P^i P^i^dagger). */
struct CommutantBasis {
  std::vector<LabeledOperator> elements;
  std::vector<double> norms;
  GroupTag tag;

  std::size_t size() const { return elements.size(); }
};

/** Modified Gram-Schmidt with one re-orthogonalization pass. */
CommutantBasis gram_schmidt(const std::vector<LabeledOperator>& ops,
                            double rank_tol = 1e-8);

/** Memory limit for commutant construction (bytes of dense spanning set). */
inline constexpr double kCommutantMemoryBudget = 2.0e9;

CommutantBasis mixed_commutant(int d, const std::vector<bool>& conjugated);
/** Commutant of U^(x)n. */
CommutantBasis collective_commutant(int d, int n);
/** Commutant of U*^(x)k (x) U. */
CommutantBasis conjugate_collective_commutant(int d, int k);

/** Closed-form three-factor bases; `basis` keeps the nonzero elements. */
struct EggelingBasis {
  std::vector<std::string> names;
  std::vector<LabeledOperator> all;
  std::vector<int> independent;
  CommutantBasis basis;
};

/** R+, R-, R0, R1, R2, R3 for U (x) U (x) U. */
EggelingBasis eggeling_r_basis(int d);
/** S+, S-, S0, S1, S2, S3 for U* (x) U* (x) U. */
EggelingBasis eggeling_s_basis(int d);

}  // namespace unitrans
