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

#include "unitrans/formulas.hpp"

#include <cmath>
#include <numbers>

#include "unitrans/errors.hpp"

namespace unitrans::formulas {

namespace {

void need_d(int d) {
  if (d < 2) throw Error("dimension must be >= 2");
}
void need_k(int k) {
  if (k < 1) throw Error("number of uses must be >= 1");
}

long double cos2(long double x) {
  const long double c = std::cos(x);
  return c * c;
}

mpq_class one_minus_pow(int d, int e) {
  mpq_class base(d * d - 1, d * d);
  base.canonicalize();
  mpq_class p(1);
  for (int i = 0; i < e; ++i) p *= base;
  return 1 - p;
}

}  // namespace

mpq_class f_conj_k1_exact(int d) {
  need_d(d);
  mpq_class v(2, d * (d - 1));
  v.canonicalize();
  return v;
}

mpq_class f_trans_k1_exact(int d) {
  need_d(d);
  mpq_class v(2, d * d);
  v.canonicalize();
  return v;
}

mpq_class par_upper_exact(int k) {
  need_k(k);
  mpq_class v(1, (k + 3) * (k + 3));
  v.canonicalize();
  return 1 - v;
}

mpq_class seq_lower_transpose_exact(int d, int k) {
  need_d(d);
  need_k(k);
  return one_minus_pow(d, (k + d - 1) / d);
}

mpq_class seq_lower_inverse_exact(int d, int k) {
  need_d(d);
  need_k(k);
  return one_minus_pow(d, (k + 1) / d);
}

std::optional<mpq_class> f_est_qubit_exact(int k) {
  need_k(k);
  if (k == 1) return mpq_class(1, 2);
  if (k == 3) return mpq_class(3, 4);
  return std::nullopt;
}

double f_conj_k1(int d) { return f_conj_k1_exact(d).get_d(); }
double f_trans_k1(int d) { return f_trans_k1_exact(d).get_d(); }
double f_inv_k1(int d) { return f_trans_k1(d); }

double f_est_qubit(int k) {
  need_k(k);
  if (auto e = f_est_qubit_exact(k)) return e->get_d();
  return static_cast<double>(cos2(std::numbers::pi_v<long double> / (k + 3)));
}

double par_upper(int k) { return par_upper_exact(k).get_d(); }
double seq_lower_transpose(int d, int k) { return seq_lower_transpose_exact(d, k).get_d(); }
double seq_lower_inverse(int d, int k) { return seq_lower_inverse_exact(d, k).get_d(); }

double f_pbt_qubit(int k) {
  need_k(k);
  if (k == 2) return 0.5;
  if (k == 1) return 0.25;
  return static_cast<double>(cos2(std::numbers::pi_v<long double> / (k + 2)));
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::exact:
      return "exact";
    case BoundKind::upper:
      return "upper";
    case BoundKind::lower:
      return "lower";
  }
  return "?";
}

std::vector<BoundRecord> bounds_for(const std::string& task, int d, int k) {
  need_d(d);
  need_k(k);
  std::vector<BoundRecord> out;
  if (task == "conjugate") {
    if (k == 1)
      out.push_back({task, d, k, "all", BoundKind::exact, f_conj_k1(d), "conjugation k=1"});
  } else if (task == "transpose" || task == "invert") {
    if (k == 1)
      out.push_back({task, d, k, "all", BoundKind::exact, f_trans_k1(d),
                     "single-use transposition/inversion"});
    if (d == 2)
      out.push_back({task, d, k, "parallel", BoundKind::exact, f_est_qubit(k),
                     "qubit estimation"});
    out.push_back({task, d, k, "parallel", BoundKind::upper, par_upper(k),
                   "parallel upper bound"});
    if (task == "transpose")
      out.push_back({task, d, k, "sequential", BoundKind::lower,
                     seq_lower_transpose(d, k), "probabilistic sequential transposition"});
    else
      out.push_back({task, d, k, "sequential", BoundKind::lower, seq_lower_inverse(d, k),
                     "probabilistic sequential inversion"});
  } else {
    throw Error("unknown task '" + task + "'");
  }
  return out;
}

}  // namespace unitrans::formulas
