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

#include "unitrans/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "unitrans/detail/tensor_ops.hpp"

namespace unitrans {

using IMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> hit(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= static_cast<int>(image_.size()) || hit[v])
      throw Error("permutation image is not a bijection");
    hit[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation Permutation::cycle(int n, const std::vector<int>& one_based) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  for (std::size_t i = 0; i < one_based.size(); ++i)
    im[one_based[i] - 1] = one_based[(i + 1) % one_based.size()] - 1;
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw Error("permutation size mismatch");
  std::vector<int> im(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) im[i] = image_[other.image_[i]];
  return Permutation(std::move(im));
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

std::vector<SpaceLabel> generic_labels(int d, int n) {
  std::vector<SpaceLabel> ls;
  for (int i = 0; i < n; ++i) ls.push_back({"AUX" + std::to_string(i), d});
  return ls;
}

namespace {

IMatrix permutation_matrix(const Permutation& pi, int d) {
  const int n = pi.size();
  std::vector<int> dims(n, d);
  const auto st = detail::strides_of(dims);
  const auto total = static_cast<Eigen::Index>(detail::product_of(dims));
  IMatrix m = IMatrix::Zero(total, total);
  std::vector<int> digit(n);
  for (Eigen::Index col = 0; col < total; ++col) {
    Eigen::Index rem = col;
    for (int f = n - 1; f >= 0; --f) {
      digit[f] = static_cast<int>(rem % d);
      rem /= d;
    }
    std::size_t row = 0;
    for (int m_ = 0; m_ < n; ++m_) row += digit[m_] * st[pi(m_)];
    m(static_cast<Eigen::Index>(row), col) = 1;
  }
  return m;
}

void check_budget(int d, int n) {
  double perms = 1.0;
  for (int i = 2; i <= n; ++i) perms *= i;
  const double bytes = perms * std::pow(static_cast<double>(d), 2.0 * n) * 16.0;
  if (bytes > kCommutantMemoryBudget)
    throw Error("commutant of " + std::to_string(n) + " factors of dimension " +
                std::to_string(d) + " exceeds the memory budget");
}

cplx inner(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

}  // namespace

LabeledOperator permutation_operator(const Permutation& pi, int d, int n) {
  if (n < 1 || pi.size() != n) throw Error("permutation_operator: size mismatch");
  return LabeledOperator(generic_labels(d, n), permutation_matrix(pi, d).cast<cplx>());
}

IMatrix partially_transposed_permutation(const Permutation& pi, int d,
                                         const std::vector<bool>& transposed) {
  if (static_cast<int>(transposed.size()) != pi.size())
    throw Error("partial transpose mask has wrong length");
  IMatrix m = permutation_matrix(pi, d);
  std::vector<int> sub;
  for (int i = 0; i < pi.size(); ++i)
    if (transposed[i]) sub.push_back(i);
  if (sub.empty()) return m;
  return detail::partial_transpose<std::int64_t>(m, std::vector<int>(pi.size(), d), sub);
}

UnitaryMatrix haar_unitary(int d, std::uint64_t seed) {
  if (d < 2) throw Error("haar_unitary: d must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) z(r, c) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const cplx rii = r(i, i);
    q.col(i) *= rii / std::abs(rii);
  }
  const double theta = std::arg(q.determinant());
  q *= std::polar(1.0, -theta / d);
  return UnitaryMatrix(std::move(q));
}

CommutantBasis gram_schmidt(const std::vector<LabeledOperator>& ops, double rank_tol) {
  if (ops.empty()) throw Error("gram_schmidt: empty input");
  CommutantBasis out;
  std::vector<CMatrix> qs;
  bool any_nonzero = false;
  for (const auto& op : ops) {
    if (!op.same_labels(ops.front())) throw Error("gram_schmidt: label mismatch");
    CMatrix v = op.matrix();
    const double n0 = v.norm();
    if (n0 == 0.0) continue;
    any_nonzero = true;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : qs) v -= (inner(q, v) / inner(q, q).real()) * q;
    if (v.norm() < rank_tol * n0) continue;
    qs.push_back(v);
    out.norms.push_back(inner(v, v).real());
    out.elements.emplace_back(op.labels(), std::move(v));
  }
  if (!any_nonzero) throw Error("gram_schmidt: all inputs are zero");
  return out;
}

CommutantBasis mixed_commutant(int d, const std::vector<bool>& conjugated) {
  const int n = static_cast<int>(conjugated.size());
  if (n < 1 || d < 1) throw Error("mixed_commutant: bad arguments");
  check_budget(d, n);
  const std::vector<bool>& mask = conjugated;
  std::vector<LabeledOperator> span;
  for (const auto& pi : all_permutations(n))
    span.emplace_back(generic_labels(d, n),
                      partially_transposed_permutation(pi, d, mask).cast<cplx>());
  auto basis = gram_schmidt(span);
  basis.tag.d = d;
  basis.tag.n = n;
  basis.tag.conjugated = conjugated;
  const bool none = std::none_of(mask.begin(), mask.end(), [](bool b) { return b; });
  const bool all = std::all_of(mask.begin(), mask.end(), [](bool b) { return b; });
  bool conj_coll = !mask.back();
  for (int i = 0; i + 1 < n; ++i) conj_coll = conj_coll && mask[i];
  basis.tag.kind = (none || all) ? GroupKind::collective
                   : conj_coll   ? GroupKind::conjugate_collective
                                 : GroupKind::mixed;
  return basis;
}

CommutantBasis collective_commutant(int d, int n) {
  if (n < 2) throw Error("collective_commutant: n must be >= 2");
  return mixed_commutant(d, std::vector<bool>(n, false));
}

CommutantBasis conjugate_collective_commutant(int d, int k) {
  if (k < 1) throw Error("conjugate_collective_commutant: k must be >= 1");
  std::vector<bool> mask(k + 1, true);
  mask.back() = false;
  return mixed_commutant(d, mask);
}

namespace {

EggelingBasis finish_eggeling(int d, std::vector<std::string> names,
                              std::vector<CMatrix> mats, std::vector<bool> conj) {
  EggelingBasis out;
  out.names = std::move(names);
  for (auto& m : mats) out.all.emplace_back(generic_labels(d, 3), std::move(m));
  for (std::size_t i = 0; i < out.all.size(); ++i)
    if (out.all[i].matrix().norm() > 1e-8) {
      out.independent.push_back(static_cast<int>(i));
      out.basis.elements.push_back(out.all[i]);
      out.basis.norms.push_back(out.all[i].matrix().squaredNorm());
    }
  out.basis.tag = {GroupKind::custom, d, 3, std::move(conj)};
  return out;
}

CMatrix perm3(int d, const std::vector<int>& cyc) {
  const auto pi = cyc.empty() ? Permutation::identity(3) : Permutation::cycle(3, cyc);
  return permutation_matrix(pi, d).cast<cplx>();
}

}  // namespace

EggelingBasis eggeling_r_basis(int d) {
  if (d < 2) throw Error("eggeling_r_basis: d must be >= 2");
  const CMatrix one = perm3(d, {});
  const CMatrix v12 = perm3(d, {1, 2}), v23 = perm3(d, {2, 3}), v31 = perm3(d, {3, 1});
  const CMatrix v123 = perm3(d, {1, 2, 3}), v321 = perm3(d, {3, 2, 1});
  const cplx i(0.0, 1.0);
  const double s3 = std::sqrt(3.0);
  std::vector<CMatrix> m{(one + v12 + v23 + v31 + v123 + v321) / 6.0,
                         (one - v12 - v23 - v31 + v123 + v321) / 6.0,
                         (2.0 * one - v123 - v321) / 3.0,
                         (2.0 * v23 - v31 - v12) / 3.0,
                         (v12 - v31) / s3,
                         i * (v123 - v321) / s3};
  return finish_eggeling(d, {"R+", "R-", "R0", "R1", "R2", "R3"}, std::move(m),
                         {false, false, false});
}

EggelingBasis eggeling_s_basis(int d) {
  if (d < 2) throw Error("eggeling_s_basis: d must be >= 2");
  const int n = d * d * d;
  const CMatrix one = CMatrix::Identity(n, n);
  CMatrix phi = CMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) phi(a * d + a, b * d + b) = 1.0;
  const CMatrix x = Eigen::kroneckerProduct(CMatrix::Identity(d, d), phi).eval();
  const CMatrix v = perm3(d, {1, 2});
  const cplx i(0.0, 1.0);
  const double dd = static_cast<double>(d);
  const double e = dd * dd - 1.0;
  const CMatrix psym = (one + v) / 2.0, pasym = (one - v) / 2.0;
  std::vector<CMatrix> m{psym * (one - 2.0 * x / (dd + 1.0)) * psym,
                         pasym * (one - 2.0 * x / (dd - 1.0)) * pasym,
                         (dd * (x + v * x * v) - (x * v + v * x)) / e,
                         (dd * (x * v + v * x) - (x + v * x * v)) / e,
                         (x - v * x * v) / std::sqrt(e),
                         i * (x * v - v * x) / std::sqrt(e)};
  return finish_eggeling(d, {"S+", "S-", "S0", "S1", "S2", "S3"}, std::move(m),
                         {true, true, false});
}

}  // namespace unitrans
