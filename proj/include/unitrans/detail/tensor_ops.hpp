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

// Index kernels on square matrices over a tensor product of factors.
// Factor 0 is the most significant digit of the row/column index.
// Templated on the scalar so the exact certification path can reuse them.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace unitrans::detail {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

inline std::vector<std::size_t> strides_of(const std::vector<int>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * static_cast<std::size_t>(dims[i + 1]);
  return s;
}

inline std::size_t product_of(const std::vector<int>& dims) {
  std::size_t p = 1;
  for (int d : dims) p *= static_cast<std::size_t>(d);
  return p;
}

// Offsets in the full index for every multi-index over the chosen factors,
// enumerated in the order the factors are listed.
inline std::vector<std::size_t> offsets(const std::vector<int>& dims,
                                        const std::vector<int>& factors) {
  const auto st = strides_of(dims);
  std::vector<std::size_t> out{0};
  for (int f : factors) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[f]);
    for (std::size_t base : out)
      for (int v = 0; v < dims[f]; ++v) next.push_back(base + v * st[f]);
    out.swap(next);
  }
  return out;
}

inline std::vector<int> complement(int nfactors, const std::vector<int>& sub) {
  std::vector<bool> in(nfactors, false);
  for (int f : sub) in[f] = true;
  std::vector<int> out;
  for (int i = 0; i < nfactors; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

// Reorder factors: new factor t is old factor order[t].
template <typename T>
Mat<T> permute_factors(const Mat<T>& m, const std::vector<int>& dims,
                       const std::vector<int>& order) {
  const auto idx = offsets(dims, order);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Mat<T> out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = m(idx[r], idx[c]);
  return out;
}

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, 1> permute_vector_factors(
    const Eigen::Matrix<T, Eigen::Dynamic, 1>& v, const std::vector<int>& dims,
    const std::vector<int>& order) {
  const auto idx = offsets(dims, order);
  Eigen::Matrix<T, Eigen::Dynamic, 1> out(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) out(r) = v(idx[r]);
  return out;
}

// Trace out `traced`; remaining factors keep their relative order.
template <typename T>
Mat<T> partial_trace(const Mat<T>& m, const std::vector<int>& dims,
                     const std::vector<int>& traced) {
  const auto keep = complement(static_cast<int>(dims.size()), traced);
  const auto ko = offsets(dims, keep);
  const auto to = offsets(dims, traced);
  const auto n = static_cast<Eigen::Index>(ko.size());
  Mat<T> out = Mat<T>::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      T acc = T(0);
      for (std::size_t t : to) acc += m(ko[a] + t, ko[b] + t);
      out(a, b) = acc;
    }
  return out;
}

template <typename T>
Mat<T> partial_transpose(const Mat<T>& m, const std::vector<int>& dims,
                         const std::vector<int>& sub) {
  const auto keep = complement(static_cast<int>(dims.size()), sub);
  const auto ko = offsets(dims, keep);
  const auto so = offsets(dims, sub);
  Mat<T> out(m.rows(), m.cols());
  for (std::size_t rk : ko)
    for (std::size_t rs : so)
      for (std::size_t ck : ko)
        for (std::size_t cs : so) out(rk + rs, ck + cs) = m(rk + cs, ck + rs);
  return out;
}

// a acts on the complement of `id_factors`; the result is a (x) 1 on those.
template <typename T>
Mat<T> embed_identity(const Mat<T>& a, const std::vector<int>& dims,
                      const std::vector<int>& id_factors) {
  const auto keep = complement(static_cast<int>(dims.size()), id_factors);
  const auto ko = offsets(dims, keep);
  const auto to = offsets(dims, id_factors);
  const auto n = static_cast<Eigen::Index>(product_of(dims));
  Mat<T> out = Mat<T>::Zero(n, n);
  for (std::size_t b = 0; b < ko.size(); ++b)
    for (std::size_t a2 = 0; a2 < ko.size(); ++a2) {
      const T v = a(a2, b);
      if (v == T(0)) continue;
      for (std::size_t t : to) out(ko[a2] + t, ko[b] + t) = v;
    }
  return out;
}

}  // namespace unitrans::detail
