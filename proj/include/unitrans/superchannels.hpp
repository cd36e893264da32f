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

#include <Eigen/SparseCore>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "unitrans/perfop.hpp"
#include "unitrans/tensor.hpp"

namespace unitrans {

enum class ConeClass { parallel, sequential, general };

std::string to_string(ConeClass c);
ConeClass cone_class_from_string(const std::string& s);

/** coeff * _X S, where _X S = tr_X(S) (x) 1_X / d_X. An empty X is S itself. */
struct TraceReplaceTerm {
  int coeff = 1;
  std::vector<std::string> spaces;
};

/** sum_t coeff_t * _{X_t} S = 0. */
struct TraceReplaceIdentity {
  std::vector<TraceReplaceTerm> terms;

  std::string describe() const;
  /** Spaces traced by every term. */
  std::vector<std::string> common_spaces() const;
};

struct SuperchannelCone {
  ConeClass kind = ConeClass::parallel;
  int d = 2;
  int k = 1;
  std::vector<int> slot_order;  // sequential: slots in causal order, 1-based
  std::vector<TraceReplaceIdentity> identities;
  double trace = 0.0;  // tr S = d_P d_O unless overridden

  std::vector<SpaceLabel> labels() const { return superchannel_labels(d, k); }
  std::string name() const;
};

SuperchannelCone cone_parallel(int d, int k);
/** `order` lists the slots from first to last; empty means 1..k. */
SuperchannelCone cone_sequential(int d, int k, std::vector<int> order = {});
SuperchannelCone cone_general_k2(int d);
/** Dispatch; the k = 1 general cone is the one-slot cone. */
SuperchannelCone cone_for(ConeClass c, int d, int k);

/** sum_t coeff_t * _{X_t} S. */
LabeledOperator identity_residual(const TraceReplaceIdentity& id, const LabeledOperator& s);

/** One scalar constraint <A, S> = b with A real symmetric. */
struct ScalarConstraint {
  Eigen::SparseMatrix<double> a;
  double b = 0.0;
};

/**
 * The cone's affine constraints for real symmetric S as a linearly
 * independent list, trace row first. Each identity contributes
 * <M(E) (x) 1_X0, S> = 0 for symmetric matrix units E on the complement of the
 * common traced spaces X0.
 */
std::vector<ScalarConstraint> expand_constraints(const SuperchannelCone& cone);

struct ValidationReport {
  std::vector<double> identity_residuals;
  double trace_residual = 0.0;
  double max_affine_residual = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  bool passed = false;
  std::vector<std::string> violations;
};

ValidationReport validate(const LabeledOperator& s, const SuperchannelCone& cone,
                          double tol = 1e-8);

/** tr(S)/n * identity: strictly positive and in every cone. */
LabeledOperator noise_superchannel(const SuperchannelCone& cone);

/** Random channel Choi: (T^{-1/2} (x) 1) G G^dagger (T^{-1/2} (x) 1), T = tr_out. */
LabeledOperator random_channel_choi(const std::vector<SpaceLabel>& in,
                                    const std::vector<SpaceLabel>& out, std::mt19937_64& rng);
/** E * D with memory AUX0 of dimension d. */
LabeledOperator random_parallel_member(int d, int k, std::uint64_t seed);
/** E_1 * ... * E_k * D with the slots used in `order`. */
LabeledOperator random_sequential_member(int d, int k, std::uint64_t seed,
                                         std::vector<int> order = {});

/** sum_i rho * M_i^T * R_i. */
LabeledOperator assemble_measure_and_prepare(const LabeledOperator& rho,
                                             const std::vector<LabeledOperator>& povm,
                                             const std::vector<LabeledOperator>& recover);

/** Probe |phi> on I.., AUX0 and a recovery channel from P, O.., AUX0 to F. */
struct DelayedInput {
  LabeledVector probe;
  LabeledOperator recovery;

  LabeledOperator superchannel() const;  // |phi><phi| * R
};

/** Requires tr_OF S = 1_P/d_P (x) tr_POF S. */
DelayedInput delayed_input_form(const LabeledOperator& s, int k, double tol = 1e-8);

/** Projection onto operators invariant under both task actions. */
LabeledOperator twirl(const LabeledOperator& s, TaskSpec task);

struct ParallelForm {
  LabeledOperator encoder;  // P -> I.., AUX0 (copy of P), AUX1..AUXk (copy of I)
  LabeledOperator decoder;  // AUX0..AUXk, O.. -> F
  LabeledOperator superchannel;
};

/**
 * Parallel superchannel with the same action on every U^(x)k, for S whose
 * H = tr_F S commutes with 1 (x) 1 (x) U^(x)k (checked on sampled U).
 */
ParallelForm parallelize_covariant(const LabeledOperator& s, int k, int samples = 20,
                                   std::uint64_t seed = 1, double tol = 1e-8);

struct Superinstrument {
  std::vector<LabeledOperator> branches;
  SuperchannelCone cone;

  LabeledOperator total() const;
};

/** Branches PSD and their sum in the cone. */
ValidationReport validate(const Superinstrument& s, double tol = 1e-8);

/**
 * An exact transformation with success probability p_s completes to a
 * deterministic one of the same class with average fidelity at least p_s.
 */
double probabilistic_lower_bound(double p_s);

}  // namespace unitrans
