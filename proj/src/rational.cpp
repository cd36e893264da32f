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

#include "unitrans/rational.hpp"

#include <cmath>
#include <numeric>

#include "unitrans/errors.hpp"

namespace unitrans {

mpq_class round_to_denominator(double x, long denominator) {
  if (!std::isfinite(x)) throw NumericalError("cannot round a non-finite value");
  if (denominator < 1) throw Error("denominator must be positive");
  const long double scaled = std::nearbyint(static_cast<long double>(x) * denominator);
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), static_cast<double>(scaled));
  mpq_class q(num, mpz_class(denominator));
  q.canonicalize();
  return q;
}

std::optional<QVector> solve_exact(QMatrix a, QVector b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n)
    throw Error("solve_exact: shape mismatch");
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (sgn(a(r, c)) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    if (piv != c) {
      for (int j = c; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(b[c], b[piv]);
    }
    const mpq_class inv = 1 / a(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (sgn(a(r, c)) == 0) continue;
      const mpq_class f = a(r, c) * inv;
      for (int j = c + 1; j < n; ++j)
        if (sgn(a(c, j)) != 0) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
      a(r, c) = 0;
    }
  }
  QVector x(n);
  for (int r = n - 1; r >= 0; --r) {
    mpq_class s = b[r];
    for (int j = r + 1; j < n; ++j)
      if (sgn(a(r, j)) != 0) s -= a(r, j) * x[j];
    x[r] = s / a(r, r);
  }
  return x;
}

bool is_psd_exact(const QMatrix& q) {
  const int n = q.rows();
  if (q.cols() != n) throw Error("is_psd_exact: matrix is not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (q(i, j) != q(j, i)) throw Error("is_psd_exact: matrix is not symmetric");
  // Clear denominators, then Bareiss elimination keeps every entry integral.
  mpz_class den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                                         q(i, j).get_den_mpz_t());
  std::vector<mpz_class> a(std::size_t(n) * n);
  auto at = [&](int i, int j) -> mpz_class& { return a[std::size_t(i) * n + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpq_class v = q(i, j) * den;
      at(i, j) = v.get_num();
    }
  std::vector<int> rem(n);
  std::iota(rem.begin(), rem.end(), 0);
  mpz_class prev = 1;
  while (!rem.empty()) {
    std::size_t best = 0;
    for (std::size_t t = 0; t < rem.size(); ++t) {
      const mpz_class& dt = at(rem[t], rem[t]);
      if (sgn(dt) < 0) return false;
      if (dt > at(rem[best], rem[best])) best = t;
    }
    const int p = rem[best];
    if (sgn(at(p, p)) == 0) {
      for (int i : rem)
        for (int j : rem)
          if (sgn(at(i, j)) != 0) return false;
      return true;
    }
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(best));
    const mpz_class piv = at(p, p);
    mpz_class t;
    for (std::size_t x = 0; x < rem.size(); ++x) {
      const int i = rem[x];
      for (std::size_t y = x; y < rem.size(); ++y) {
        const int j = rem[y];
        t = piv * at(i, j) - at(i, p) * at(p, j);
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        at(j, i) = at(i, j);
      }
    }
    prev = piv;
  }
  return true;
}

mpq_class dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw Error("dot: length mismatch");
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

std::string to_fraction_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_fraction(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw Error("malformed rational '" + s + "'");
  if (q.get_den() == 0) throw Error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace unitrans
