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

#include "unitrans/symmetry.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <unsupported/Eigen/KroneckerProduct>

#include "unitrans/detail/tensor_ops.hpp"

namespace unitrans {

namespace {

std::vector<std::string> numbered(const std::string& prefix, int k) {
  std::vector<std::string> out;
  for (int j = 1; j <= k; ++j) out.push_back(prefix + std::to_string(j));
  return out;
}

GroupAction make_action(std::vector<std::string> slots, const std::string& last,
                        bool conj_slots) {
  GroupAction g;
  g.labels = std::move(slots);
  g.conjugated.assign(g.labels.size(), conj_slots);
  g.labels.push_back(last);
  g.conjugated.push_back(false);
  return g;
}

std::int64_t trace_of_product(const IMatrix& a, const IMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

// Greedy exact selection: index i is kept when its Gram residual against
// the kept ones is nonzero.
std::vector<int> independent_by_gram(int count,
                                     const std::function<mpq_class(int, int)>& gram) {
  std::vector<int> kept;
  std::vector<std::vector<mpq_class>> l;  // unit lower factor rows of kept
  std::vector<mpq_class> dg;
  for (int x = 0; x < count; ++x) {
    std::vector<mpq_class> row(kept.size());
    mpq_class res = gram(x, x);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      mpq_class v = gram(kept[i], x);
      for (std::size_t j = 0; j < i; ++j) v -= row[j] * l[i][j] * dg[j];
      row[i] = v / dg[i];
      res -= row[i] * row[i] * dg[i];
    }
    if (sgn(res) != 0) {
      kept.push_back(x);
      l.push_back(std::move(row));
      dg.push_back(res);
    }
  }
  return kept;
}

Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("Gram matrix of the invariant basis is not positive definite");
  return es.operatorInverseSqrt();
}

}  // namespace

std::pair<GroupAction, GroupAction> task_symmetry(Task t, int k) {
  if (k < 1) throw Error("task_symmetry: k must be >= 1");
  const auto in = numbered("I", k), out = numbered("O", k);
  switch (t) {
    case Task::transpose:
      return {make_action(out, "P", true), make_action(in, "F", true)};
    case Task::invert:
      return {make_action(out, "P", false), make_action(in, "F", false)};
    case Task::conjugate:
      return {make_action(in, "P", false), make_action(out, "F", false)};
    case Task::identity:
      return {make_action(in, "P", true), make_action(out, "F", true)};
  }
  throw Error("task_symmetry: unsupported task");
}

FactorAlgebra factor_algebra(int d, const GroupAction& action) {
  const int n = static_cast<int>(action.labels.size());
  if (n < 1 || action.conjugated.size() != action.labels.size())
    throw Error("factor_algebra: malformed group action");
  const auto perms = all_permutations(n);
  std::vector<IMatrix> all;
  for (const auto& p : perms) all.push_back(partially_transposed_permutation(p, d, action.conjugated));
  const int m = static_cast<int>(all.size());
  IMatrix g(m, m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c <= a; ++c) g(a, c) = g(c, a) = all[a].cwiseProduct(all[c]).sum();
  const auto keep =
      independent_by_gram(m, [&](int i, int j) { return mpq_class(static_cast<long>(g(i, j))); });

  FactorAlgebra fa;
  fa.action = action;
  fa.d = d;
  for (int i : keep) {
    fa.perms.push_back(perms[i]);
    fa.elements.push_back(std::move(all[i]));
  }
  const int r = fa.size();
  fa.gram.resize(r, r);
  fa.gram_plain.resize(r, r);
  for (int a = 0; a < r; ++a)
    for (int c = 0; c < r; ++c) {
      fa.gram(a, c) = fa.elements[a].cwiseProduct(fa.elements[c]).sum();
      fa.gram_plain(a, c) = trace_of_product(fa.elements[a], fa.elements[c]);
    }
  std::vector<IMatrix> qa_qe(std::size_t(r) * r);
  for (int a = 0; a < r; ++a)
    for (int e = 0; e < r; ++e) qa_qe[a * r + e] = fa.elements[a] * fa.elements[e];
  fa.triple.assign(r, IMatrix(r, r));
  for (int a = 0; a < r; ++a)
    for (int c = 0; c < r; ++c)
      for (int e = 0; e < r; ++e)
        fa.triple[a](c, e) = fa.elements[c].cwiseProduct(qa_qe[a * r + e]).sum();
  return fa;
}

InvariantAlgebra::InvariantAlgebra(TaskSpec task) : task_(task) {
  task.validate();
  const int d = task.d, k = task.k;
  auto [ga, gb] = task_symmetry(task.f, k);
  a1_ = factor_algebra(d, ga);
  a2_ = factor_algebra(d, gb);
  n_ = 1;
  for (int i = 0; i < 2 * k + 2; ++i) n_ *= d;

  std::vector<std::string> concat = ga.labels;
  concat.insert(concat.end(), gb.labels.begin(), gb.labels.end());
  for (const auto& l : superchannel_labels(d, k)) {
    const auto it = std::find(concat.begin(), concat.end(), l.name);
    order_.push_back(static_cast<int>(it - concat.begin()));
  }

  const int r1 = a1_.size(), r2 = a2_.size();
  auto entry = [&](int x, int y) {
    const int a = x / r2, b = x % r2, c = y / r2, e = y % r2;
    const long v = 2 * (a1_.gram(a, c) * a2_.gram(b, e) +
                        a1_.gram_plain(a, c) * a2_.gram_plain(b, e));
    return mpq_class(v);
  };
  for (int x : independent_by_gram(r1 * r2, entry)) sym_.push_back({x / r2, x % r2});
  const int s = symmetric_size();
  gs_.resize(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const auto [a, b] = sym_[i];
      const auto [c, e] = sym_[j];
      gs_(i, j) = 2 * (a1_.gram(a, c) * a2_.gram(b, e) +
                       a1_.gram_plain(a, c) * a2_.gram_plain(b, e));
    }

  gh_inv_sqrt_ = inverse_sqrt_spd(regular_identity().cast<double>());
  for (int j = 0; j < s; ++j)
    lmi_.push_back(gh_inv_sqrt_ * regular(j).cast<double>() * gh_inv_sqrt_);
}

IMatrix InvariantAlgebra::to_canonical(const IMatrix& m) const {
  std::vector<int> dims(order_.size(), task_.d);
  return detail::permute_factors<std::int64_t>(m, dims, order_);
}

IMatrix InvariantAlgebra::product_element(int a, int b) const {
  const IMatrix raw = Eigen::kroneckerProduct(a1_.elements[a], a2_.elements[b]).eval();
  return to_canonical(raw);
}

IMatrix InvariantAlgebra::symmetric_element(int j) const {
  const auto [a, b] = sym_[j];
  const IMatrix e = product_element(a, b);
  return e + e.transpose();
}

IMatrix InvariantAlgebra::regular(int j) const {
  const auto [a, b] = sym_[j];
  const IMatrix k = Eigen::kroneckerProduct(a1_.triple[a], a2_.triple[b]).eval();
  return k + k.transpose();
}

IMatrix InvariantAlgebra::regular_identity() const {
  return Eigen::kroneckerProduct(a1_.gram, a2_.gram).eval();
}

Eigen::MatrixXd InvariantAlgebra::lmi(const Eigen::VectorXd& w) const {
  if (w.size() != symmetric_size()) throw Error("lmi: coordinate length mismatch");
  const int r = product_size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < symmetric_size(); ++j) out += w(j) * lmi_[j];
  return out;
}

Eigen::VectorXd InvariantAlgebra::symmetric_coordinates(const Eigen::MatrixXd& s) const {
  if (s.rows() != n_ || s.cols() != n_) throw Error("symmetric_coordinates: shape mismatch");
  const int ns = symmetric_size();
  Eigen::VectorXd rhs(ns);
  for (int j = 0; j < ns; ++j) rhs(j) = symmetric_element(j).cast<double>().cwiseProduct(s).sum();
  return gs_.cast<double>().ldlt().solve(rhs);
}

CMatrix InvariantAlgebra::twirl(const CMatrix& s) const {
  if (s.rows() != n_ || s.cols() != n_) throw Error("twirl: shape mismatch");
  const int r1 = a1_.size(), r2 = a2_.size();
  std::vector<IMatrix> basis;
  CVector rhs(r1 * r2);
  for (int a = 0; a < r1; ++a)
    for (int b = 0; b < r2; ++b) {
      basis.push_back(product_element(a, b));
      rhs(a * r2 + b) = basis.back().cast<cplx>().cwiseProduct(s).sum();
    }
  const Eigen::MatrixXd g = regular_identity().cast<double>();
  const CVector x = g.ldlt().solve(rhs.real()).cast<cplx>() +
                    cplx(0.0, 1.0) * g.ldlt().solve(rhs.imag()).cast<cplx>();
  CMatrix out = CMatrix::Zero(n_, n_);
  for (std::size_t i = 0; i < basis.size(); ++i) out += x(i) * basis[i].cast<cplx>();
  return out;
}

Eigen::MatrixXd InvariantAlgebra::assemble(const Eigen::VectorXd& w) const {
  if (w.size() != symmetric_size()) throw Error("assemble: coordinate length mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  for (int j = 0; j < symmetric_size(); ++j)
    if (w(j) != 0.0) out += w(j) * symmetric_element(j).cast<double>();
  return out;
}

}  // namespace unitrans
