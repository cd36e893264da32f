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

// Primal-dual interior point method for one real symmetric block:
//
//   (P)  min <C, X>   s.t. <A_i, X> = b_i,  X psd
//   (D)  max b^T y    s.t. C - sum_i y_i A_i = Z psd
//
// Nesterov-Todd scaling, Mehrotra predictor-corrector, infeasible start.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

namespace unitrans {

struct SdpInstance {
  Eigen::MatrixXd c;
  std::vector<Eigen::SparseMatrix<double>> a;  // symmetric
  Eigen::VectorXd b;

  int n() const { return static_cast<int>(c.rows()); }
  int m() const { return static_cast<int>(a.size()); }
};

enum class SolverStatus { optimal, max_iterations, stalled, diverged, numerical_failure };

std::string to_string(SolverStatus s);

struct SolverOptions {
  double tol = 1e-9;
  int max_iter = 200;
  double step_fraction = 0.98;
  bool verbose = false;
};

struct SolverResult {
  SolverStatus status = SolverStatus::numerical_failure;
  Eigen::MatrixXd x, z;
  Eigen::VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

SolverResult solve_sdp(const SdpInstance& p, const SolverOptions& opts = {});

}  // namespace unitrans
