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

#include <cstdint>
#include <functional>
#include <string>

#include "unitrans/groups.hpp"
#include "unitrans/tensor.hpp"

namespace unitrans {

enum class Task { conjugate, transpose, invert, identity };

std::string to_string(Task t);
Task task_from_string(const std::string& s);

struct TaskSpec {
  Task f = Task::transpose;
  int d = 2;
  int k = 1;

  // f(UV) = f(U) f(V) for conjugate/identity; f(UV) = f(V) f(U) otherwise.
  bool homomorphic() const { return f == Task::conjugate || f == Task::identity; }
  void validate() const;
};

CMatrix apply_task(Task f, const CMatrix& u);

struct PerformanceOperator {
  LabeledOperator omega;  // over P, I1..Ik, O1..Ok, F
  TaskSpec task;
};

inline constexpr int kMaxUses = 3;

/** Omega = 1/d^2 sum_i conj(P^i on I..,P) (x) P^i on O..,F / d_i. */
PerformanceOperator omega_homomorphic(const CommutantBasis& basis, TaskSpec task);
/** Omega = 1/d^2 sum_i conj(P^i on O..,P) (x) P^i on I..,F / d_i. */
PerformanceOperator omega_antihomomorphic(const CommutantBasis& basis, TaskSpec task);
PerformanceOperator omega_build(TaskSpec task);

struct MonteCarloOmega {
  PerformanceOperator omega;
  double stderr_frobenius = 0.0;  // sqrt(sum of per-entry variances / N)
  long samples = 0;
};

/** Empirical Haar average; `f` overrides the task map when given. */
MonteCarloOmega omega_monte_carlo(TaskSpec task, long samples, std::uint64_t seed,
                                  const std::function<CMatrix(const CMatrix&)>& f = {});

/** Omega before the Haar average: 1/d^2 |1>><<1|_{PF} (x) |1>><<1|_{I_j O_j}^(x)k. */
LabeledOperator omega_seed(int d, int k);

double average_fidelity(const LabeledOperator& s, const PerformanceOperator& omega);
/** (1/d^2) <<f(U)| S * |U>><<U|^(x)k |f(U)>> */
double fidelity_at_unitary(const LabeledOperator& s, const UnitaryMatrix& u, TaskSpec task);
/** S * |U>><<U|^(x)k, a Choi operator on P, F. */
LabeledOperator apply_superchannel(const LabeledOperator& s, const CMatrix& u, int k);

double visibility_from_fidelity(double fidelity, int d);
double fidelity_from_visibility(double eta, int d);

}  // namespace unitrans
