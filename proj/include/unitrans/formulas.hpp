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

namespace unitrans::formulas {

// Closed-form fidelities and bounds. Trigonometric forms are evaluated in
// long double and rounded once; rational forms also have exact variants.

double f_conj_k1(int d);
double f_trans_k1(int d);
double f_inv_k1(int d);
double f_est_qubit(int k);
double par_upper(int k);
double seq_lower_transpose(int d, int k);
double seq_lower_inverse(int d, int k);
double f_pbt_qubit(int k);

mpq_class f_conj_k1_exact(int d);
mpq_class f_trans_k1_exact(int d);
mpq_class par_upper_exact(int k);
mpq_class seq_lower_transpose_exact(int d, int k);
mpq_class seq_lower_inverse_exact(int d, int k);
// cos^2(pi/(k+3)) is rational only for k = 1 and k = 3.
std::optional<mpq_class> f_est_qubit_exact(int k);

enum class BoundKind { exact, upper, lower };

struct BoundRecord {
  std::string task;
  int d = 0;
  int k = 0;
  std::string cone;
  BoundKind kind = BoundKind::exact;
  double value = 0.0;
  std::string source;
};

std::string to_string(BoundKind k);

/** Every closed form that applies to (task, d, k); task in conjugate/transpose/invert. */
std::vector<BoundRecord> bounds_for(const std::string& task, int d, int k);

}  // namespace unitrans::formulas
