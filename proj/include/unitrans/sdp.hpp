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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unitrans/perfop.hpp"
#include "unitrans/rational.hpp"
#include "unitrans/sdp_solver.hpp"
#include "unitrans/superchannels.hpp"
#include "unitrans/symmetry.hpp"

namespace unitrans {

/** Largest operator side solved without symmetry reduction. */
inline constexpr int kFullSpaceBudget = 81;

/**
 * The cone restricted to real symmetric operators invariant under the task
 * symmetry, in coordinates S = sum_j w_j B_j. Affine rows are exact.
 */
struct ReducedSpace {
  std::shared_ptr<const InvariantAlgebra> algebra;
  QMatrix rows;               // every distinct row, trace row first
  QVector rhs;
  std::vector<int> selected;  // independent subset of `rows`, trace row first
  QVector objective;          // c_j = tr(Omega B_j)
  mpq_class trace;
  mpq_class noise_weight;     // w_noise = noise_weight * e_0

  Eigen::MatrixXd r;          // selected rows
  Eigen::VectorXd h;
  Eigen::MatrixXd nullspace;  // orthonormal basis of ker r
  Eigen::VectorXd c;
  Eigen::VectorXd w_noise;

  int size() const { return static_cast<int>(objective.size()); }
  int free_dimension() const { return static_cast<int>(nullspace.cols()); }
  int lmi_size() const { return algebra->product_size(); }
};

std::shared_ptr<const ReducedSpace> reduced_space(TaskSpec task, const SuperchannelCone& cone);

/** max tr(C S) over the cone, S real symmetric. */
struct SdpProblem {
  TaskSpec task;
  SuperchannelCone cone;
  bool reduced = true;
  int n = 0;
  Eigen::MatrixXd objective;                // full-space only
  std::vector<ScalarConstraint> constraints;  // full-space only
  std::shared_ptr<const ReducedSpace> space;  // always present; certification runs here

  /** Number of real unknowns the solver sees. */
  int variable_dimension() const;
};

/**
 * Builds the problem. The reduced variable is the coefficient vector over the
 * invariant real subspace; the objective is carried over exactly. Rejects a
 * non-positive trace and a cone whose noise point is infeasible.
 */
SdpProblem assemble(const PerformanceOperator& omega, const SuperchannelCone& cone,
                    bool reduce = true);

struct SdpSolution {
  SolverStatus status = SolverStatus::numerical_failure;
  int iterations = 0;
  double primal_objective = 0.0;  // tr(Omega S) at the returned S
  double dual_objective = 0.0;    // upper bound implied by the dual iterate
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  Eigen::MatrixXd x;  // the optimizer S
  Eigen::VectorXd y;  // solver multipliers
  Eigen::MatrixXd z;  // solver slack
  Eigen::VectorXd w;  // invariant coordinates of S
  Eigen::VectorXd g;  // dual functional in the same coordinates

  bool solved() const { return status == SolverStatus::optimal; }
  double value() const { return primal_objective; }
};

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});

/** Omega <= lambda * Sbar with tr(Sbar S) = 1 on the cone. */
struct DualPoint {
  double lambda = 0.0;
  Eigen::MatrixXd sbar;
  double min_eigenvalue = 0.0;  // of lambda * Sbar - Omega
};

DualPoint dual_extract(const SdpProblem& p, const SdpSolution& sol);

struct CertifiedInterval {
  mpq_class lower, upper;
  QVector primal_point;  // exact feasible coordinates
  mpq_class mixing;      // weight of the noise point in primal_point
  QVector multipliers;   // exact, one per selected row
  mpq_class inflation;   // delta: (sum v_j B_j) + delta * 1 is psd
  long primal_denominator = 0;
  long dual_denominator = 0;
  std::vector<std::string> notes;

  double width() const { return mpq_class(upper - lower).get_d(); }
  bool contains(const mpq_class& q) const { return lower <= q && q <= upper; }
};

/**
 * Exact bounds from a solved problem. Widens the rounding denominators when
 * the first attempt exceeds `precision` and records it in `notes`.
 */
CertifiedInterval certify(const SdpProblem& p, const SdpSolution& sol, double precision = 1e-4);

/** Re-check both certificates from scratch. */
bool verify_certificate(const SdpProblem& p, const CertifiedInterval& c);

struct TaskReport {
  TaskSpec task;
  SuperchannelCone cone;
  SdpProblem problem;
  SdpSolution solution;
  std::optional<CertifiedInterval> interval;
  double fidelity = 0.0;
  double visibility = 0.0;
};

struct OptimizeOptions {
  SolverOptions solver;
  bool reduce = true;
  bool certify = true;
  double precision = 1e-4;
};

TaskReport optimize_task(TaskSpec task, ConeClass cls, const OptimizeOptions& opts = {});

}  // namespace unitrans
