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

// Rigorous bounds. Lower: a rational point on the affine space, pulled
// toward the noise point until it is exactly psd. Upper: rational
// multipliers mu with c = R^T mu - g', where g' pairs with S through
// X_v = sum v_j B_j, and X_v + delta * 1 is exactly psd. Then for every
// cone member c.w <= mu.h + delta * tr S.

#include <cmath>

#include "unitrans/errors.hpp"
#include "unitrans/sdp.hpp"

namespace unitrans {

namespace {

mpq_class ceil_to_denominator(double x, long den) {
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), static_cast<double>(std::ceil(static_cast<long double>(x) * den)));
  mpq_class q(num, mpz_class(den));
  q.canonicalize();
  return q;
}

struct Exact {
  const ReducedSpace& sp;
  std::vector<IMatrix> regular;  // K(B_j)
  IMatrix gh;                    // K(1)
  int s, r;

  explicit Exact(const ReducedSpace& space) : sp(space) {
    const InvariantAlgebra& alg = *sp.algebra;
    s = sp.size();
    r = alg.product_size();
    for (int j = 0; j < s; ++j) regular.push_back(alg.regular(j));
    gh = alg.regular_identity();
  }

  // K(sum w_j B_j) + extra * K(1)
  QMatrix k_of(const QVector& w, const mpq_class& extra = 0) const {
    QMatrix out(r, r);
    for (int j = 0; j < s; ++j) {
      if (sgn(w[j]) == 0) continue;
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          if (regular[j](a, b) != 0) out(a, b) += w[j] * static_cast<long>(regular[j](a, b));
    }
    if (sgn(extra) != 0)
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          if (gh(a, b) != 0) out(a, b) += extra * static_cast<long>(gh(a, b));
    return out;
  }

  double lmi_min(const QVector& w) const {
    Eigen::VectorXd v(s);
    for (int j = 0; j < s; ++j) v(j) = w[j].get_d();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sp.algebra->lmi(v), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  bool satisfies_rows(const QVector& w) const {
    for (int i = 0; i < sp.rows.rows(); ++i) {
      mpq_class acc = 0;
      for (int j = 0; j < s; ++j)
        if (sgn(sp.rows(i, j)) != 0) acc += sp.rows(i, j) * w[j];
      if (acc != sp.rhs[i]) return false;
    }
    return true;
  }

  QVector noise() const {
    QVector w(s, mpq_class(0));
    w[0] = sp.noise_weight;
    return w;
  }

  // g' = R_sel^T mu - c
  QVector functional(const QVector& mu) const {
    QVector g(s);
    for (int j = 0; j < s; ++j) {
      mpq_class acc = -sp.objective[j];
      for (std::size_t i = 0; i < sp.selected.size(); ++i)
        acc += sp.rows(sp.selected[i], j) * mu[i];
      g[j] = acc;
    }
    return g;
  }

  QVector gram_solve(const QVector& rhs) const {
    const IMatrix& gs = sp.algebra->symmetric_gram();
    QMatrix a(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) a(i, j) = static_cast<long>(gs(i, j));
    auto v = solve_exact(a, rhs);
    if (!v) throw NumericalError("Gram matrix of the invariant basis is singular");
    return *v;
  }

  mpq_class dual_value(const QVector& mu, const mpq_class& delta) const {
    mpq_class acc = delta * sp.trace;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += mu[i] * sp.rhs[sp.selected[i]];
    return acc;
  }
};

struct LowerResult {
  mpq_class value, mixing;
  QVector point;
};

LowerResult lower_bound(const Exact& ex, const Eigen::VectorXd& w, long den) {
  const ReducedSpace& sp = ex.sp;
  const int s = ex.s;
  const int m = static_cast<int>(sp.selected.size());
  QVector wr(s);
  for (int j = 0; j < s; ++j) wr[j] = round_to_denominator(w(j), den);

  // Exact projection onto the selected rows.
  QVector res(m);
  for (int i = 0; i < m; ++i) {
    mpq_class acc = sp.rhs[sp.selected[i]];
    for (int j = 0; j < s; ++j) acc -= sp.rows(sp.selected[i], j) * wr[j];
    res[i] = acc;
  }
  QMatrix rrt(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      mpq_class acc = 0;
      for (int j = 0; j < s; ++j) acc += sp.rows(sp.selected[a], j) * sp.rows(sp.selected[b], j);
      rrt(a, b) = acc;
      rrt(b, a) = acc;
    }
  const auto lam = solve_exact(rrt, res);
  if (!lam) throw NumericalError("selected constraint rows are dependent");
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < m; ++i) wr[j] += sp.rows(sp.selected[i], j) * (*lam)[i];
  if (!ex.satisfies_rows(wr))
    throw NumericalError("projected point violates a constraint row");

  // Mix with the noise point until exactly psd.
  const QVector nz = ex.noise();
  const double tn = 2.0 * sp.noise_weight.get_d();
  const double lo = ex.lmi_min(wr);
  double t = lo >= 0.0 ? 0.0 : std::min(1.0, 2.0 * (-lo) / (tn - lo));
  for (int attempt = 0; attempt < 80; ++attempt) {
    const mpq_class tq = ceil_to_denominator(t, 1000000000000L);
    QVector cand(s);
    for (int j = 0; j < s; ++j) cand[j] = (1 - tq) * wr[j] + tq * nz[j];
    if (is_psd_exact(ex.k_of(cand))) {
      LowerResult out;
      out.value = dot(sp.objective, cand);
      out.mixing = tq;
      out.point = std::move(cand);
      return out;
    }
    if (t >= 1.0) break;
    t = std::min(1.0, std::max(2.0 * t, 1e-12));
  }
  throw NumericalError("could not repair the primal point to an exactly psd one");
}

struct UpperResult {
  mpq_class value, delta;
  QVector mu;
};

UpperResult upper_bound(const Exact& ex, const Eigen::VectorXd& g, long den) {
  const ReducedSpace& sp = ex.sp;
  const Eigen::VectorXd muf = sp.r.transpose().colPivHouseholderQr().solve(sp.c + g);
  QVector mu(muf.size());
  for (Eigen::Index i = 0; i < muf.size(); ++i) mu[i] = round_to_denominator(muf(i), den);
  const QVector v = ex.gram_solve(ex.functional(mu));
  const double lo = ex.lmi_min(v);
  double delta = lo >= 0.0 ? 0.0 : -lo * (1.0 + 1e-6) + 1e-15;
  for (int attempt = 0; attempt < 80; ++attempt) {
    const mpq_class dq = ceil_to_denominator(delta, 1000000000000000L);
    if (is_psd_exact(ex.k_of(v, dq))) {
      UpperResult out;
      out.delta = dq;
      out.value = ex.dual_value(mu, dq);
      out.mu = std::move(mu);
      return out;
    }
    delta = std::max(2.0 * delta, 1e-14);
  }
  throw NumericalError("could not inflate the dual point to an exactly psd one");
}

}  // namespace

CertifiedInterval certify(const SdpProblem& p, const SdpSolution& sol, double precision) {
  if (sol.w.size() == 0 || sol.g.size() == 0)
    throw Error("certify: the problem has not been solved");
  if (!(precision > 0.0)) throw Error("certify: precision must be positive");
  if (!sol.solved() && sol.gap > precision / 10)
    throw NumericalError("certify: solution gap " + std::to_string(sol.gap) +
                         " is above precision/10 (" + to_string(sol.status) + ")");
  const Exact ex(*p.space);
  const long primal_dens[] = {1000000L, 100000000L, 10000000000L};
  const long dual_dens[] = {1000000000L, 100000000000L, 10000000000000L};

  CertifiedInterval best;
  bool have = false;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const LowerResult lo = lower_bound(ex, sol.w, primal_dens[attempt]);
    const UpperResult up = upper_bound(ex, sol.g, dual_dens[attempt]);
    CertifiedInterval ci;
    ci.lower = lo.value;
    ci.upper = up.value;
    ci.primal_point = lo.point;
    ci.mixing = lo.mixing;
    ci.multipliers = up.mu;
    ci.inflation = up.delta;
    ci.primal_denominator = primal_dens[attempt];
    ci.dual_denominator = dual_dens[attempt];
    if (ci.lower > ci.upper)
      throw NumericalError("certified lower bound exceeds the upper bound");
    if (!have || ci.width() < best.width()) {
      best = std::move(ci);
      best.notes.clear();
      have = true;
    }
    if (best.width() <= precision) break;
    best.notes.push_back("width " + std::to_string(best.width()) + " above " +
                         std::to_string(precision) + " with denominators " +
                         std::to_string(primal_dens[attempt]) + "/" +
                         std::to_string(dual_dens[attempt]) + "; retrying finer");
  }
  if (best.width() > precision)
    best.notes.push_back("requested precision not reached; interval widened");
  return best;
}

bool verify_certificate(const SdpProblem& p, const CertifiedInterval& c) {
  const Exact ex(*p.space);
  if (static_cast<int>(c.primal_point.size()) != ex.s ||
      c.multipliers.size() != p.space->selected.size())
    return false;
  if (!ex.satisfies_rows(c.primal_point)) return false;
  if (!is_psd_exact(ex.k_of(c.primal_point))) return false;
  if (dot(p.space->objective, c.primal_point) != c.lower) return false;
  if (sgn(c.inflation) < 0) return false;
  const QVector v = ex.gram_solve(ex.functional(c.multipliers));
  if (!is_psd_exact(ex.k_of(v, c.inflation))) return false;
  return ex.dual_value(c.multipliers, c.inflation) == c.upper && c.lower <= c.upper;
}

}  // namespace unitrans
