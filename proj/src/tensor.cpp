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

#include "unitrans/tensor.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "unitrans/detail/tensor_ops.hpp"

namespace unitrans {

namespace {

std::pair<int, long> label_key(const std::string& name) {
  auto digits = [&](std::size_t from) -> long {
    if (from >= name.size()) return -1;
    for (std::size_t i = from; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    if (name.size() - from > 6) return -1;
    return std::stol(name.substr(from));
  };
  if (name == "P") return {0, 0};
  if (name == "F") return {3, 0};
  if (name.rfind("AUX", 0) == 0) {
    long n = digits(3);
    if (n >= 0) return {4, n};
  } else if (!name.empty() && (name[0] == 'I' || name[0] == 'O')) {
    long j = digits(1);
    if (j >= 1) return {name[0] == 'I' ? 1 : 2, j};
  }
  throw Error("invalid space label '" + name +
              "' (expected P, I<j>, O<j>, F or AUX<n>)");
}

std::vector<int> indices_of(const LabeledOperator& a,
                            const std::vector<std::string>& names) {
  std::vector<int> out;
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error("duplicate label '" + n + "' in subset");
    out.push_back(a.index_of(n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SpaceLabel> pick(const std::vector<SpaceLabel>& ls,
                             const std::vector<int>& idx) {
  std::vector<SpaceLabel> out;
  for (int i : idx) out.push_back(ls[i]);
  return out;
}

std::vector<int> canonical_order(const std::vector<SpaceLabel>& ls) {
  std::vector<int> order(ls.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return canonical_less(ls[a].name, ls[b].name);
  });
  return order;
}

void check_labels(const std::vector<SpaceLabel>& ls) {
  std::set<std::string> seen;
  for (const auto& l : ls) {
    check_label_name(l.name);
    if (l.dim < 1) throw Error("label '" + l.name + "' has dimension < 1");
    if (!seen.insert(l.name).second) throw Error("duplicate label '" + l.name + "'");
  }
}

std::vector<int> dims_of(const std::vector<SpaceLabel>& ls) {
  std::vector<int> d;
  for (const auto& l : ls) d.push_back(l.dim);
  return d;
}

}  // namespace

bool canonical_less(const std::string& a, const std::string& b) {
  return label_key(a) < label_key(b);
}

void check_label_name(const std::string& name) { (void)label_key(name); }

LabeledOperator::LabeledOperator(std::vector<SpaceLabel> labels, CMatrix m) {
  check_labels(labels);
  const auto dims = dims_of(labels);
  const auto n = static_cast<Eigen::Index>(detail::product_of(dims));
  if (m.rows() != m.cols()) throw Error("operator matrix is not square");
  if (m.rows() != n)
    throw Error("operator side " + std::to_string(m.rows()) +
                " does not match label dimensions " + std::to_string(n));
  const auto order = canonical_order(labels);
  bool sorted = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] != static_cast<int>(i)) sorted = false;
  if (sorted) {
    labels_ = std::move(labels);
    m_ = std::move(m);
  } else {
    m_ = detail::permute_factors<cplx>(m, dims, order);
    labels_ = pick(labels, order);
  }
}

LabeledOperator LabeledOperator::identity(std::vector<SpaceLabel> labels) {
  const auto n = static_cast<Eigen::Index>(detail::product_of(dims_of(labels)));
  return LabeledOperator(std::move(labels), CMatrix::Identity(n, n));
}

LabeledOperator LabeledOperator::zero(std::vector<SpaceLabel> labels) {
  const auto n = static_cast<Eigen::Index>(detail::product_of(dims_of(labels)));
  return LabeledOperator(std::move(labels), CMatrix::Zero(n, n));
}

std::vector<int> LabeledOperator::dims() const { return dims_of(labels_); }

std::vector<std::string> LabeledOperator::names() const {
  std::vector<std::string> out;
  for (const auto& l : labels_) out.push_back(l.name);
  return out;
}

bool LabeledOperator::has_label(const std::string& name) const {
  return std::any_of(labels_.begin(), labels_.end(),
                     [&](const SpaceLabel& l) { return l.name == name; });
}

int LabeledOperator::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i].name == name) return static_cast<int>(i);
  throw Error("unknown label '" + name + "'");
}

int LabeledOperator::dim_of(const std::string& name) const {
  return labels_[index_of(name)].dim;
}

LabeledOperator LabeledOperator::adjoint() const {
  return LabeledOperator(labels_, m_.adjoint());
}

LabeledOperator LabeledOperator::conjugate() const {
  return LabeledOperator(labels_, m_.conjugate());
}

LabeledOperator LabeledOperator::real_part() const {
  return LabeledOperator(labels_, m_.real().cast<cplx>());
}

double LabeledOperator::hermiticity_residual() const {
  if (m_.size() == 0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double LabeledOperator::min_eigenvalue() const {
  const CMatrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

LabeledOperator& LabeledOperator::operator+=(const LabeledOperator& o) {
  if (!same_labels(o)) throw Error("label mismatch in operator sum");
  m_ += o.m_;
  return *this;
}

LabeledOperator& LabeledOperator::operator-=(const LabeledOperator& o) {
  if (!same_labels(o)) throw Error("label mismatch in operator difference");
  m_ -= o.m_;
  return *this;
}

LabeledOperator& LabeledOperator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

LabeledOperator LabeledOperator::compose(const LabeledOperator& o) const {
  if (!same_labels(o)) throw Error("label mismatch in operator product");
  return LabeledOperator(labels_, m_ * o.m_);
}

double LabeledOperator::distance(const LabeledOperator& o) const {
  if (!same_labels(o)) throw Error("label mismatch in operator comparison");
  if (m_.size() == 0) return 0.0;
  return (m_ - o.m_).cwiseAbs().maxCoeff();
}

LabeledOperator operator+(LabeledOperator a, const LabeledOperator& b) {
  a += b;
  return a;
}

LabeledOperator operator-(LabeledOperator a, const LabeledOperator& b) {
  a -= b;
  return a;
}

LabeledOperator operator*(cplx s, LabeledOperator a) {
  a *= s;
  return a;
}

LabeledVector::LabeledVector(std::vector<SpaceLabel> ls, CVector vec) {
  check_labels(ls);
  const auto dims = dims_of(ls);
  if (vec.size() != static_cast<Eigen::Index>(detail::product_of(dims)))
    throw Error("vector length does not match label dimensions");
  const auto order = canonical_order(ls);
  v = detail::permute_vector_factors<cplx>(vec, dims, order);
  labels = pick(ls, order);
}

LabeledOperator LabeledVector::projector() const {
  return LabeledOperator(labels, v * v.adjoint());
}

UnitaryMatrix::UnitaryMatrix(CMatrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() < 1) throw Error("unitary must be square");
  const auto n = u_.rows();
  if ((u_.adjoint() * u_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("matrix is not unitary to 1e-12");
  if (std::abs(u_.determinant() - cplx(1.0)) > 1e-10)
    throw ValidationError("unitary determinant is not 1 to 1e-10");
}

CVector choi_vector(const CMatrix& u) {
  if (u.rows() != u.cols()) throw Error("choi_vector: matrix must be square");
  const auto d = u.rows();
  CVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = u(j, i);
  return v;
}

LabeledVector choi_vector(const CMatrix& u, const std::string& in,
                          const std::string& out) {
  const int d = static_cast<int>(u.rows());
  return LabeledVector({{in, d}, {out, d}}, choi_vector(u));
}

LabeledOperator choi_of_unitary(const CMatrix& u, const std::string& in,
                                const std::string& out) {
  return choi_vector(u, in, out).projector();
}

LabeledOperator partial_trace(const LabeledOperator& a,
                              const std::vector<std::string>& subset) {
  const auto idx = indices_of(a, subset);
  const auto keep = detail::complement(static_cast<int>(a.labels().size()), idx);
  return LabeledOperator(pick(a.labels(), keep),
                         detail::partial_trace<cplx>(a.matrix(), a.dims(), idx));
}

LabeledOperator partial_transpose(const LabeledOperator& a,
                                  const std::vector<std::string>& subset) {
  const auto idx = indices_of(a, subset);
  return LabeledOperator(a.labels(),
                         detail::partial_transpose<cplx>(a.matrix(), a.dims(), idx));
}

LabeledOperator trace_and_replace(const LabeledOperator& a,
                                  const std::vector<std::string>& subset) {
  const auto idx = indices_of(a, subset);
  const auto dims = a.dims();
  double dx = 1.0;
  for (int i : idx) dx *= dims[i];
  CMatrix t = detail::partial_trace<cplx>(a.matrix(), dims, idx);
  t /= dx;
  return LabeledOperator(a.labels(), detail::embed_identity<cplx>(t, dims, idx));
}

LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b) {
  for (const auto& l : b.labels())
    if (a.has_label(l.name)) throw Error("tensor: label '" + l.name + "' on both sides");
  auto ls = a.labels();
  ls.insert(ls.end(), b.labels().begin(), b.labels().end());
  return LabeledOperator(std::move(ls),
                         Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
}

LabeledVector tensor(const LabeledVector& a, const LabeledVector& b) {
  auto ls = a.labels;
  ls.insert(ls.end(), b.labels.begin(), b.labels.end());
  CVector v(a.v.size() * b.v.size());
  for (Eigen::Index i = 0; i < a.v.size(); ++i)
    v.segment(i * b.v.size(), b.v.size()) = a.v(i) * b.v;
  return LabeledVector(std::move(ls), std::move(v));
}

LabeledOperator embed(const LabeledOperator& a, const std::vector<SpaceLabel>& extra) {
  return tensor(a, LabeledOperator::identity(extra));
}

LabeledOperator relabel(const LabeledOperator& a,
                        const std::map<std::string, std::string>& rename) {
  auto ls = a.labels();
  for (auto& l : ls) {
    auto it = rename.find(l.name);
    if (it != rename.end()) l.name = it->second;
  }
  return LabeledOperator(std::move(ls), a.matrix());
}

LabeledVector relabel(const LabeledVector& a,
                      const std::map<std::string, std::string>& rename) {
  auto ls = a.labels;
  for (auto& l : ls) {
    auto it = rename.find(l.name);
    if (it != rename.end()) l.name = it->second;
  }
  return LabeledVector(std::move(ls), a.v);
}

LabeledOperator link_product(const LabeledOperator& a, const LabeledOperator& b) {
  std::vector<int> a_only, a_sh, b_sh, b_only;
  for (std::size_t i = 0; i < a.labels().size(); ++i) {
    const auto& l = a.labels()[i];
    if (b.has_label(l.name)) {
      const int j = b.index_of(l.name);
      if (b.labels()[j].dim != l.dim)
        throw Error("link_product: dimension mismatch on shared label '" + l.name + "'");
      a_sh.push_back(static_cast<int>(i));
      b_sh.push_back(j);
    } else {
      a_only.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t j = 0; j < b.labels().size(); ++j)
    if (!a.has_label(b.labels()[j].name)) b_only.push_back(static_cast<int>(j));

  const auto da = a.dims(), db = b.dims();
  const auto oa = detail::offsets(da, a_only), sa = detail::offsets(da, a_sh);
  const auto sb = detail::offsets(db, b_sh), ob = detail::offsets(db, b_only);
  const auto na = static_cast<Eigen::Index>(oa.size());
  const auto ns = static_cast<Eigen::Index>(sa.size());
  const auto nb = static_cast<Eigen::Index>(ob.size());

  // (A*B)[(x,y),(x',y')] = sum_{s,t} A[(x,t),(x',s)] B[(t,y),(s,y')]
  CMatrix at(na * na, ns * ns), bt(ns * ns, nb * nb);
  const CMatrix& am = a.matrix();
  const CMatrix& bm = b.matrix();
  for (Eigen::Index s = 0; s < ns; ++s)
    for (Eigen::Index t = 0; t < ns; ++t)
      for (Eigen::Index x2 = 0; x2 < na; ++x2)
        for (Eigen::Index x = 0; x < na; ++x)
          at(x * na + x2, t * ns + s) = am(oa[x] + sa[t], oa[x2] + sa[s]);
  for (Eigen::Index y2 = 0; y2 < nb; ++y2)
    for (Eigen::Index y = 0; y < nb; ++y)
      for (Eigen::Index s = 0; s < ns; ++s)
        for (Eigen::Index t = 0; t < ns; ++t)
          bt(t * ns + s, y * nb + y2) = bm(sb[t] + ob[y], sb[s] + ob[y2]);
  const CMatrix ct = at * bt;
  CMatrix c(na * nb, na * nb);
  for (Eigen::Index y2 = 0; y2 < nb; ++y2)
    for (Eigen::Index x2 = 0; x2 < na; ++x2)
      for (Eigen::Index y = 0; y < nb; ++y)
        for (Eigen::Index x = 0; x < na; ++x)
          c(x * nb + y, x2 * nb + y2) = ct(x * na + x2, y * nb + y2);
  auto ls = pick(a.labels(), a_only);
  const auto lb = pick(b.labels(), b_only);
  ls.insert(ls.end(), lb.begin(), lb.end());
  return LabeledOperator(std::move(ls), std::move(c));
}

std::vector<std::string> input_names(int k) {
  std::vector<std::string> out;
  for (int j = 1; j <= k; ++j) out.push_back("I" + std::to_string(j));
  return out;
}

std::vector<std::string> output_names(int k) {
  std::vector<std::string> out;
  for (int j = 1; j <= k; ++j) out.push_back("O" + std::to_string(j));
  return out;
}

std::vector<SpaceLabel> superchannel_labels(int d, int k) {
  std::vector<SpaceLabel> ls{{"P", d}};
  for (const auto& n : input_names(k)) ls.push_back({n, d});
  for (const auto& n : output_names(k)) ls.push_back({n, d});
  ls.push_back({"F", d});
  return ls;
}

}  // namespace unitrans
