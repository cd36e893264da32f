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

#include "unitrans/perfop.hpp"

#include <cmath>

#include "unitrans/detail/tensor_ops.hpp"

namespace unitrans {

std::string to_string(Task t) {
  switch (t) {
    case Task::conjugate:
      return "conjugate";
    case Task::transpose:
      return "transpose";
    case Task::invert:
      return "invert";
    case Task::identity:
      return "identity";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "conjugate") return Task::conjugate;
  if (s == "transpose") return Task::transpose;
  if (s == "invert") return Task::invert;
  if (s == "identity") return Task::identity;
  throw Error("unknown task '" + s + "' (expected conjugate, transpose, invert or identity)");
}

void TaskSpec::validate() const {
  if (d < 2) throw Error("task dimension must be >= 2");
  if (k < 1) throw Error("task needs k >= 1 uses");
}

CMatrix apply_task(Task f, const CMatrix& u) {
  switch (f) {
    case Task::conjugate:
      return u.conjugate();
    case Task::transpose:
      return u.transpose();
    case Task::invert:
      return u.adjoint();
    case Task::identity:
      return u;
  }
  return u;
}

namespace {

std::map<std::string, std::string> placement(int k, const std::vector<std::string>& slots,
                                             const std::string& last) {
  std::map<std::string, std::string> m;
  for (int j = 0; j < k; ++j) m["AUX" + std::to_string(j)] = slots[j];
  m["AUX" + std::to_string(k)] = last;
  return m;
}

PerformanceOperator omega_from_basis(const CommutantBasis& basis, TaskSpec task,
                                     const std::vector<std::string>& conj_slots,
                                     const std::string& conj_last,
                                     const std::vector<std::string>& plain_slots,
                                     const std::string& plain_last) {
  task.validate();
  if (basis.elements.empty()) throw Error("performance operator from an empty basis");
  const int k = task.k;
  const auto first = placement(k, conj_slots, conj_last);
  const auto second = placement(k, plain_slots, plain_last);
  LabeledOperator omega = LabeledOperator::zero(superchannel_labels(task.d, k));
  for (std::size_t i = 0; i < basis.elements.size(); ++i) {
    const auto& p = basis.elements[i];
    if (static_cast<int>(p.labels().size()) != k + 1)
      throw Error("commutant basis has the wrong number of factors for k");
    for (const auto& l : p.labels())
      if (l.dim != task.d) throw Error("commutant basis has the wrong local dimension");
    auto term = tensor(relabel(p.conjugate(), first), relabel(p, second));
    omega += (1.0 / basis.norms[i]) * term;
  }
  omega *= 1.0 / (task.d * task.d);
  const double im = omega.matrix().imag().cwiseAbs().maxCoeff();
  if (im > 1e-12)
    throw NumericalError("performance operator has imaginary residual " + std::to_string(im));
  omega = omega.real_part();
  return {omega, task};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Raw factor order P, F, I1, O1, ..., Ik, Ok -> canonical index map.
std::vector<std::size_t> raw_to_canonical(int d, int k) {
  std::vector<int> dims(2 * k + 2, d);
  std::vector<int> order{0};
  for (int j = 0; j < k; ++j) order.push_back(2 + 2 * j);
  for (int j = 0; j < k; ++j) order.push_back(3 + 2 * j);
  order.push_back(1);
  return detail::offsets(dims, order);
}

CVector raw_product(const std::vector<CVector>& parts) {
  CVector v = CVector::Ones(1);
  for (const auto& p : parts) {
    CVector next(v.size() * p.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * p.size(), p.size()) = v(i) * p;
    v.swap(next);
  }
  return v;
}

}  // namespace

PerformanceOperator omega_homomorphic(const CommutantBasis& basis, TaskSpec task) {
  return omega_from_basis(basis, task, input_names(task.k), "P", output_names(task.k), "F");
}

PerformanceOperator omega_antihomomorphic(const CommutantBasis& basis, TaskSpec task) {
  return omega_from_basis(basis, task, output_names(task.k), "P", input_names(task.k), "F");
}

PerformanceOperator omega_build(TaskSpec task) {
  task.validate();
  if (task.k > kMaxUses)
    throw Error("omega_build supports k <= " + std::to_string(kMaxUses));
  switch (task.f) {
    case Task::conjugate:
      return omega_homomorphic(collective_commutant(task.d, task.k + 1), task);
    case Task::identity:
      return omega_homomorphic(conjugate_collective_commutant(task.d, task.k), task);
    case Task::transpose:
      return omega_antihomomorphic(conjugate_collective_commutant(task.d, task.k), task);
    case Task::invert:
      return omega_antihomomorphic(collective_commutant(task.d, task.k + 1), task);
  }
  throw Error("unsupported task");
}

MonteCarloOmega omega_monte_carlo(TaskSpec task, long samples, std::uint64_t seed,
                                  const std::function<CMatrix(const CMatrix&)>& f) {
  task.validate();
  if (samples < 1) throw Error("omega_monte_carlo needs at least one sample");
  const int d = task.d, k = task.k;
  const auto idx = raw_to_canonical(d, k);
  const auto n = static_cast<Eigen::Index>(idx.size());
  CMatrix sum = CMatrix::Zero(n, n);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(n, n);
  const double scale = 1.0 / (d * d);
  for (long s = 0; s < samples; ++s) {
    const CMatrix u = haar_unitary(d, mix_seed(seed, static_cast<std::uint64_t>(s))).matrix();
    const CMatrix fu = f ? f(u) : apply_task(task.f, u);
    std::vector<CVector> parts{choi_vector(fu)};
    const CVector uc = choi_vector(u.conjugate());
    for (int j = 0; j < k; ++j) parts.push_back(uc);
    const CVector raw = raw_product(parts);
    CVector v(n);
    for (Eigen::Index r = 0; r < n; ++r) v(r) = raw(idx[r]);
    const CMatrix sample = scale * (v * v.adjoint());
    sum += sample;
    sumsq += sample.cwiseAbs2();
  }
  const double nn = static_cast<double>(samples);
  CMatrix mean = sum / nn;
  double var_total = 0.0;
  if (samples > 1) {
    const Eigen::MatrixXd var =
        (sumsq / nn - mean.cwiseAbs2()).cwiseMax(0.0) * (nn / (nn - 1.0));
    var_total = var.sum();
  }
  mean = 0.5 * (mean + mean.adjoint()).eval();
  MonteCarloOmega out;
  out.omega = {LabeledOperator(superchannel_labels(d, k), std::move(mean)), task};
  out.stderr_frobenius = std::sqrt(var_total / nn);
  out.samples = samples;
  return out;
}

LabeledOperator omega_seed(int d, int k) {
  const CMatrix one = CMatrix::Identity(d, d);
  std::vector<CVector> parts(k + 1, choi_vector(one));
  const CVector raw = raw_product(parts);
  const auto idx = raw_to_canonical(d, k);
  CVector v(raw.size());
  for (Eigen::Index r = 0; r < v.size(); ++r) v(r) = raw(idx[r]);
  return LabeledOperator(superchannel_labels(d, k), (v * v.adjoint()) / double(d * d));
}

double average_fidelity(const LabeledOperator& s, const PerformanceOperator& omega) {
  if (!s.same_labels(omega.omega))
    throw Error("average_fidelity: superchannel labels do not match the performance operator");
  return (s.matrix().transpose().cwiseProduct(omega.omega.matrix())).sum().real();
}

LabeledOperator apply_superchannel(const LabeledOperator& s, const CMatrix& u, int k) {
  LabeledOperator c = choi_of_unitary(u, "I1", "O1");
  for (int j = 2; j <= k; ++j)
    c = tensor(c, choi_of_unitary(u, "I" + std::to_string(j), "O" + std::to_string(j)));
  for (const auto& l : c.labels())
    if (!s.has_label(l.name)) throw Error("superchannel lacks label '" + l.name + "'");
  return link_product(s, c);
}

double fidelity_at_unitary(const LabeledOperator& s, const UnitaryMatrix& u, TaskSpec task) {
  task.validate();
  if (u.dim() != task.d) throw Error("unitary dimension does not match the task");
  const LabeledOperator out = apply_superchannel(s, u.matrix(), task.k);
  const LabeledVector target = choi_vector(apply_task(task.f, u.matrix()), "P", "F");
  if (out.labels() != target.labels)
    throw Error("superchannel output is not an operator on P, F");
  const cplx val = target.v.adjoint() * out.matrix() * target.v;
  return val.real() / (task.d * task.d);
}

double visibility_from_fidelity(double fidelity, int d) {
  const double lo = 1.0 / (d * d);
  if (d < 2 || fidelity < lo - 1e-12 || fidelity > 1.0 + 1e-12)
    throw Error("fidelity out of range [1/d^2, 1]");
  return (fidelity - lo) / (1.0 - lo);
}

double fidelity_from_visibility(double eta, int d) {
  if (d < 2 || eta < -1e-12 || eta > 1.0 + 1e-12) throw Error("visibility out of range [0, 1]");
  return eta + (1.0 - eta) / (d * d);
}

}  // namespace unitrans
