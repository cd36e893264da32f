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

#include "unitrans/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "unitrans/errors.hpp"

namespace unitrans {

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal:
      return "optimal";
    case SolverStatus::max_iterations:
      return "max_iterations";
    case SolverStatus::stalled:
      return "stalled";
    case SolverStatus::diverged:
      return "diverged";
    case SolverStatus::numerical_failure:
      return "numerical_failure";
  }
  return "?";
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Sparse = Eigen::SparseMatrix<double>;

double inner(const Sparse& a, const Mat& x) {
  double s = 0.0;
  for (int c = 0; c < a.outerSize(); ++c)
    for (Sparse::InnerIterator it(a, c); it; ++it) s += it.value() * x(it.row(), it.col());
  return s;
}

// The linear map A and its adjoint; constraints that are mostly dense are
// stacked as columns so the Schur complement becomes one matrix product.
class Ops {
 public:
  explicit Ops(const SdpInstance& p) : p_(p) {
    const double n2 = double(p.n()) * p.n();
    double nnz = 0.0;
    for (const auto& a : p.a) nnz += a.nonZeros();
    dense_ = p.m() > 0 && nnz > 0.25 * n2 * p.m();
    if (dense_) {
      stack_ = Mat::Zero(p.n() * p.n(), p.m());
      for (int i = 0; i < p.m(); ++i) {
        Eigen::Map<Mat> col(stack_.col(i).data(), p.n(), p.n());
        col = Mat(p.a[i]);
      }
    }
  }

  Vec a(const Mat& x) const {
    if (dense_) return stack_.transpose() * Eigen::Map<const Vec>(x.data(), x.size());
    Vec out(p_.m());
    for (int i = 0; i < p_.m(); ++i) out(i) = inner(p_.a[i], x);
    return out;
  }

  Mat at(const Vec& y) const {
    const int n = p_.n();
    if (dense_) {
      const Vec v = stack_ * y;
      return Eigen::Map<const Mat>(v.data(), n, n);
    }
    Mat out = Mat::Zero(n, n);
    for (int i = 0; i < p_.m(); ++i)
      if (y(i) != 0.0)
        for (int c = 0; c < p_.a[i].outerSize(); ++c)
          for (Sparse::InnerIterator it(p_.a[i], c); it; ++it)
            out(it.row(), it.col()) += y(i) * it.value();
    return out;
  }

  // Column i is vec(G^T A_i G), so B^T B is the Schur complement for W = G G^T.
  Mat scaled(const Mat& g) const {
    const int m = p_.m(), n = p_.n();
    Mat out(n * n, m);
    for (int i = 0; i < m; ++i) {
      Eigen::Map<Mat> col(out.col(i).data(), n, n);
      Mat ag;
      if (dense_)
        ag.noalias() = Eigen::Map<const Mat>(stack_.col(i).data(), n, n) * g;
      else
        ag = p_.a[i] * g;
      col.noalias() = g.transpose() * ag;
    }
    return out;
  }

  // Forming B^T B squares its conditioning. QR costs about 2 n^2 m^2, which
  // only pays off for the dense reduced problems with few constraints.
  bool factor_scaled() const {
    const double n2 = double(p_.n()) * p_.n(), m = p_.m();
    return dense_ && n2 * m * m <= 1e10;
  }

  // M_ij = <A_i, W A_j W>
  Mat schur(const Mat& w) const {
    const int m = p_.m(), n = p_.n();
    if (dense_) {
      Mat t(n * n, m);
      for (int j = 0; j < m; ++j) {
        Eigen::Map<const Mat> aj(stack_.col(j).data(), n, n);
        Eigen::Map<Mat> tj(t.col(j).data(), n, n);
        const Mat aw = aj * w;
        tj.noalias() = w * aw;
      }
      Mat out = stack_.transpose() * t;
      return 0.5 * (out + out.transpose());
    }
    Mat out(m, m);
    Mat t(n, n);
    for (int j = 0; j < m; ++j) {
      const Sparse& aj = p_.a[j];
      if (aj.nonZeros() < n) {
        t.setZero();
        for (int c = 0; c < aj.outerSize(); ++c)
          for (Sparse::InnerIterator it(aj, c); it; ++it)
            t.noalias() += it.value() * w.col(it.row()) * w.row(it.col());
      } else {
        const Mat aw = aj * w;
        t.noalias() = w * aw;
      }
      for (int i = j; i < m; ++i) out(i, j) = out(j, i) = inner(p_.a[i], t);
    }
    return out;
  }

 private:
  const SdpInstance& p_;
  bool dense_ = false;
  Mat stack_;
};

Mat sym(const Mat& a) { return 0.5 * (a + a.transpose()); }

// Largest step in (0, 1] keeping d + alpha * delta psd; d is diagonal > 0.
double max_step(const Vec& dg, const Mat& delta) {
  const Vec is = dg.cwiseSqrt().cwiseInverse();
  const Mat q = is.asDiagonal() * delta * is.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(q), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lo;
}

struct Measures {
  double pobj, dobj, gap, pinf, dinf;
  double worst() const { return std::max({gap, pinf, dinf}); }
};

Measures measure(const SdpInstance& p, const Ops& ops, const Mat& x, const Vec& y, const Mat& z, double bnorm,
                 double cnorm) {
  Measures r;
  r.pobj = p.c.cwiseProduct(x).sum();
  r.dobj = p.b.dot(y);
  r.gap = std::abs(r.pobj - r.dobj) / (1.0 + std::abs(r.pobj) + std::abs(r.dobj));
  r.pinf = (p.b - ops.a(x)).norm() / (1.0 + bnorm);
  r.dinf = (p.c - z - ops.at(y)).norm() / (1.0 + cnorm);
  return r;
}

}  // namespace

SolverResult solve_sdp(const SdpInstance& p, const SolverOptions& opts) {
  const int n = p.n(), m = p.m();
  if (n == 0 || p.c.cols() != n) throw Error("solve_sdp: objective must be square and nonempty");
  if (p.b.size() != m) throw Error("solve_sdp: right-hand side length mismatch");
  for (const auto& a : p.a)
    if (a.rows() != n || a.cols() != n) throw Error("solve_sdp: constraint shape mismatch");

  const double bnorm = p.b.norm(), cnorm = p.c.norm();
  double amax = 0.0, ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    const double an = p.a[i].norm();
    amax = std::max(amax, an);
    ratio = std::max(ratio, (1.0 + std::abs(p.b(i))) / (1.0 + an));
  }
  const double rn = std::sqrt(double(n));
  const double xi = std::max({10.0, rn, n * ratio});
  const double eta = std::max({10.0, rn, (1.0 + std::max(amax, cnorm)) / rn});

  const Ops ops(p);
  Mat x = xi * Mat::Identity(n, n);
  Mat z = eta * Mat::Identity(n, n);
  Vec y = Vec::Zero(m);

  SolverResult best;
  double best_worst = std::numeric_limits<double>::infinity();
  auto keep = [&](const Measures& ms, int it) {
    if (ms.worst() < best_worst) {
      best_worst = ms.worst();
      best.x = x;
      best.y = y;
      best.z = z;
      best.primal_objective = ms.pobj;
      best.dual_objective = ms.dobj;
      best.relative_gap = ms.gap;
      best.primal_infeasibility = ms.pinf;
      best.dual_infeasibility = ms.dinf;
      best.iterations = it;
    }
  };
  auto finish = [&](SolverStatus s, int it, const char* why = "") {
    if (opts.verbose && *why) std::fprintf(stderr, "stop at %d: %s\n", it, why);
    best.status = s;
    best.iterations = it;
    return best;
  };

  int slow = 0;
  double prev_worst = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_iter; ++it) {
    const Measures ms = measure(p, ops, x, y, z, bnorm, cnorm);
    keep(ms, it);
    if (opts.verbose)
      std::fprintf(stderr, "%3d  p=% .10e d=% .10e gap=%.2e pinf=%.2e dinf=%.2e\n", it, ms.pobj,
                   ms.dobj, ms.gap, ms.pinf, ms.dinf);
    if (ms.worst() <= opts.tol) return finish(SolverStatus::optimal, it);
    if (it == opts.max_iter) break;
    if (!std::isfinite(ms.worst())) return finish(SolverStatus::numerical_failure, it, "non-finite residual");
    if (x.norm() > 1e14 || z.norm() > 1e14) return finish(SolverStatus::diverged, it);
    slow = ms.worst() > 0.9 * prev_worst ? slow + 1 : 0;
    prev_worst = std::min(prev_worst, ms.worst());
    if (slow >= 15) return finish(SolverStatus::stalled, it);

    // NT scaling point: G^{-1} X G^{-T} = G^T Z G = diag(dg).
    Eigen::LLT<Mat> lx(sym(x)), lz(sym(z));
    if (lx.info() != Eigen::Success || lz.info() != Eigen::Success)
      return finish(SolverStatus::numerical_failure, it, "iterate lost definiteness");
    const Mat lxm = lx.matrixL(), lzm = lz.matrixL();
    Eigen::BDCSVD<Mat> svd(lzm.transpose() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec dg = svd.singularValues();
    if (dg.minCoeff() <= 0.0) return finish(SolverStatus::numerical_failure, it, "degenerate scaling");
    const Mat g = lxm * svd.matrixV() * dg.cwiseSqrt().cwiseInverse().asDiagonal();
    const Mat w = g * g.transpose();
    const double mu = dg.squaredNorm() / n;

    const Vec rp = p.b - ops.a(x);
    const Mat rd = sym(p.c - z - ops.at(y));
    const Mat wrw = w * rd * w;

    // Schur system M dy = r, M = B^T B. Factor B by QR when affordable.
    Eigen::ColPivHouseholderQR<Mat> qr;
    Eigen::LLT<Mat> chol;
    Eigen::LDLT<Mat> ldlt;
    int mode = 0;  // 0: QR of B, 1: Cholesky of M, 2: LDLT of M
    if (ops.factor_scaled()) {
      qr.compute(ops.scaled(g));
      if (qr.rank() < m) return finish(SolverStatus::numerical_failure, it, "dependent constraints");
    } else {
      const Mat mm = ops.schur(w);
      chol.compute(mm);
      mode = 1;
      if (chol.info() != Eigen::Success) {
        ldlt.compute(mm);
        mode = 2;
        if (ldlt.info() != Eigen::Success)
          return finish(SolverStatus::numerical_failure, it, "singular Schur complement");
      }
    }
    auto solve_m = [&](const Vec& r) -> Vec {
      if (mode == 1) return chol.solve(r);
      if (mode == 2) return ldlt.solve(r);
      // B P = Q R: M = P R^T R P^T.
      const auto rt = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
      Vec u = qr.colsPermutation().transpose() * r;
      rt.transpose().solveInPlace(u);
      rt.solveInPlace(u);
      return qr.colsPermutation() * u;
    };

    // Direction for a scaled right-hand side Q = dX~ + dZ~.
    struct Dir {
      Mat dx, dz, dxs, dzs;
      Vec dy;
    };
    auto direction = [&](const Mat& q) {
      Dir d;
      const Mat rc = g * q * g.transpose();
      d.dy = solve_m(rp - ops.a(sym(rc - wrw)));
      d.dz = sym(rd - ops.at(d.dy));
      d.dx = sym(rc - w * d.dz * w);
      // Iterative refinement keeps A(dX) = rp when M is ill-conditioned.
      for (int ref = 0; ref < 2; ++ref) {
        const Vec e = rp - ops.a(d.dx);
        if (e.norm() <= 1e-15 * (1.0 + rp.norm())) break;
        const Vec corr_y = solve_m(e);
        const Mat at = ops.at(corr_y);
        d.dy += corr_y;
        d.dz = sym(d.dz - at);
        d.dx = sym(d.dx + w * at * w);
      }
      d.dzs = sym(g.transpose() * d.dz * g);
      d.dxs = sym(q) - d.dzs;
      return d;
    };
    auto q_of = [&](double target, const Mat& corr) {
      Mat q(n, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          q(i, j) = ((i == j ? 2.0 * (target - dg(i) * dg(i)) : 0.0) - corr(i, j)) / (dg(i) + dg(j));
      return q;
    };

    const Dir aff = direction(q_of(0.0, Mat::Zero(n, n)));
    if (!aff.dy.allFinite()) return finish(SolverStatus::numerical_failure, it, "non-finite predictor");
    const double ap = std::min(1.0, max_step(dg, aff.dxs));
    const double ad = std::min(1.0, max_step(dg, aff.dzs));
    const double mu_aff = (x + ap * aff.dx).cwiseProduct(z + ad * aff.dz).sum() / n;
    const double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3);
    const Mat corr = aff.dxs * aff.dzs + aff.dzs * aff.dxs;
    const Dir fin = direction(q_of(sigma * mu, corr));
    if (!fin.dy.allFinite()) return finish(SolverStatus::numerical_failure, it, "non-finite corrector");
    double sp = std::min(1.0, opts.step_fraction * max_step(dg, fin.dxs));
    double sd = std::min(1.0, opts.step_fraction * max_step(dg, fin.dzs));
    // Near the boundary roundoff can leave the new iterate indefinite; back off.
    auto backtrack = [](const Mat& base, const Mat& dir, double& step) {
      for (int tries = 0; tries < 30; ++tries, step *= 0.5) {
        Mat next = sym(base + step * dir);
        if (Eigen::LLT<Mat>(next).info() == Eigen::Success) return next;
      }
      return Mat();
    };
    Mat xn = backtrack(x, fin.dx, sp), zn = backtrack(z, fin.dz, sd);
    if (xn.size() == 0 || zn.size() == 0 || (sp < 1e-12 && sd < 1e-12))
      return finish(SolverStatus::stalled, it, "no admissible step");

    x = std::move(xn);
    y += sd * fin.dy;
    z = std::move(zn);
  }
  return finish(SolverStatus::max_iterations, opts.max_iter);
}

}  // namespace unitrans
