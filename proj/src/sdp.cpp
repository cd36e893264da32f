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

#include "unitrans/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "unitrans/detail/tensor_ops.hpp"
#include "unitrans/errors.hpp"

namespace unitrans {

namespace {

using Row = std::vector<std::int64_t>;

bool normalize(Row& r) {
  std::int64_t g = 0;
  for (auto v : r) g = std::gcd(g, v < 0 ? -v : v);
  if (g == 0) return false;
  const auto first = std::find_if(r.begin(), r.end(), [](auto v) { return v != 0; });
  if (*first < 0) g = -g;
  for (auto& v : r) v /= g;
  return true;
}

struct Layout {
  std::vector<int> common, rest;
  std::vector<std::pair<int, std::vector<int>>> terms;  // coeff, positions within rest
};

Layout layout_of(const TraceReplaceIdentity& id, const std::vector<SpaceLabel>& labels) {
  auto index = [&](const std::string& s) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i].name == s) return static_cast<int>(i);
    throw Error("identity refers to unknown space '" + s + "'");
  };
  Layout l;
  for (const auto& s : id.common_spaces()) l.common.push_back(index(s));
  std::sort(l.common.begin(), l.common.end());
  l.rest = detail::complement(static_cast<int>(labels.size()), l.common);
  for (const auto& t : id.terms) {
    std::vector<int> pos;
    for (const auto& s : t.spaces) {
      const int f = index(s);
      if (std::binary_search(l.common.begin(), l.common.end(), f)) continue;
      pos.push_back(static_cast<int>(std::find(l.rest.begin(), l.rest.end(), f) - l.rest.begin()));
    }
    std::sort(pos.begin(), pos.end());
    l.terms.push_back({t.coeff, pos});
  }
  return l;
}

// D * sum_t c_t _{Z_t}(Y) on the complement space; D makes it integral.
IMatrix apply_identity(const Layout& l, int d, const IMatrix& y) {
  const std::vector<int> ydims(l.rest.size(), d);
  std::set<int> uni;
  for (const auto& t : l.terms) uni.insert(t.second.begin(), t.second.end());
  std::int64_t big = 1;
  for (std::size_t i = 0; i < uni.size(); ++i) big *= d;
  IMatrix out = IMatrix::Zero(y.rows(), y.cols());
  for (const auto& [c, z] : l.terms) {
    std::int64_t dz = 1;
    for (std::size_t i = 0; i < z.size(); ++i) dz *= d;
    const std::int64_t f = c * (big / dz);
    if (z.empty()) {
      out += f * y;
      continue;
    }
    const IMatrix tz = detail::partial_trace<std::int64_t>(y, ydims, z);
    const auto keep = detail::complement(static_cast<int>(ydims.size()), z);
    const auto ko = detail::offsets(ydims, keep);
    const auto zo = detail::offsets(ydims, z);
    for (Eigen::Index b = 0; b < tz.cols(); ++b)
      for (Eigen::Index a = 0; a < tz.rows(); ++a) {
        const std::int64_t v = f * tz(a, b);
        if (v == 0) continue;
        for (std::size_t o : zo) out(ko[a] + o, ko[b] + o) += v;
      }
  }
  return out;
}

// Keeps rows that are linearly independent of the kept ones, exactly.
std::vector<int> independent_rows(const std::vector<Row>& rows) {
  std::vector<QVector> basis;  // echelon form
  std::vector<int> pivot, kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    QVector r(rows[i].size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = static_cast<long>(rows[i][j]);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const int pc = pivot[b];
      if (sgn(r[pc]) == 0) continue;
      const mpq_class f = r[pc] / basis[b][pc];
      for (std::size_t j = 0; j < r.size(); ++j)
        if (sgn(basis[b][j]) != 0) r[j] -= f * basis[b][j];
    }
    const auto nz = std::find_if(r.begin(), r.end(), [](const mpq_class& v) { return sgn(v) != 0; });
    if (nz == r.end()) continue;
    pivot.push_back(static_cast<int>(nz - r.begin()));
    basis.push_back(std::move(r));
    kept.push_back(static_cast<int>(i));
  }
  return kept;
}

Eigen::VectorXd to_double(const QVector& q) {
  Eigen::VectorXd v(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) v(i) = q[i].get_d();
  return v;
}

void check_matching(TaskSpec task, const SuperchannelCone& cone) {
  task.validate();
  if (cone.d != task.d || cone.k != task.k)
    throw Error("cone (d=" + std::to_string(cone.d) + ", k=" + std::to_string(cone.k) +
                ") does not match the task (d=" + std::to_string(task.d) +
                ", k=" + std::to_string(task.k) + ")");
  if (!(cone.trace > 0.0))
    throw ValidationError("cone trace " + std::to_string(cone.trace) +
                          " is not positive; the cone is empty");
}

}  // namespace

std::shared_ptr<const ReducedSpace> reduced_space(TaskSpec task, const SuperchannelCone& cone) {
  check_matching(task, cone);
  auto sp = std::make_shared<ReducedSpace>();
  auto alg = std::make_shared<InvariantAlgebra>(task);
  sp->algebra = alg;
  const int s = alg->symmetric_size();
  const int n = alg->dim();
  const int d = task.d;
  const auto labels = cone.labels();
  const std::vector<int> dims(labels.size(), d);

  std::vector<IMatrix> b(s);
  for (int j = 0; j < s; ++j) b[j] = alg->symmetric_element(j);

  std::vector<Row> rows;
  Row trace_row(s);
  for (int j = 0; j < s; ++j) trace_row[j] = b[j].trace();
  rows.push_back(trace_row);
  std::set<Row> seen;
  for (const auto& id : cone.identities) {
    const Layout l = layout_of(id, labels);
    std::vector<IMatrix> m(s);
    for (int j = 0; j < s; ++j)
      m[j] = apply_identity(l, d, detail::partial_trace<std::int64_t>(b[j], dims, l.common));
    const Eigen::Index ny = m[0].rows();
    for (Eigen::Index p = 0; p < ny; ++p)
      for (Eigen::Index q = p; q < ny; ++q) {
        Row r(s);
        for (int j = 0; j < s; ++j) r[j] = m[j](p, q);
        if (normalize(r) && seen.insert(r).second) rows.push_back(std::move(r));
      }
  }

  const double tr = cone.trace;
  if (std::abs(tr - std::round(tr)) > 1e-12) throw Error("cone trace must be an integer");
  sp->trace = mpq_class(static_cast<long>(std::llround(tr)));
  sp->rows = QMatrix(static_cast<int>(rows.size()), s);
  sp->rhs.assign(rows.size(), mpq_class(0));
  sp->rhs[0] = sp->trace;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < s; ++j) sp->rows(static_cast<int>(i), j) = static_cast<long>(rows[i][j]);
  sp->selected = independent_rows(rows);
  if (sp->selected.empty() || sp->selected.front() != 0)
    throw NumericalError("trace row vanishes on the invariant subspace");

  // Objective through the seed: Omega and the seed pair equally with invariant B_j.
  const LabeledOperator seed = omega_seed(d, task.k);
  std::vector<std::pair<int, int>> support;
  const double cut = 0.5 / (d * d);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (seed.matrix()(r, c).real() > cut) support.push_back({r, c});
  sp->objective.assign(s, mpq_class(0));
  for (int j = 0; j < s; ++j) {
    long acc = 0;
    for (const auto& [r, c] : support) acc += static_cast<long>(b[j](r, c));
    sp->objective[j] = mpq_class(mpz_class(acc), mpz_class(d * d));
    sp->objective[j].canonicalize();
  }

  sp->noise_weight = sp->trace / mpq_class(2L * n);
  const int m = static_cast<int>(sp->selected.size());
  sp->r.resize(m, s);
  sp->h.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < s; ++j) sp->r(i, j) = sp->rows(sp->selected[i], j).get_d();
    sp->h(i) = sp->rhs[sp->selected[i]].get_d();
  }
  if (m > s) throw NumericalError("more independent rows than unknowns");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sp->r, Eigen::ComputeFullV);
  sp->nullspace = svd.matrixV().rightCols(s - m);
  sp->c = to_double(sp->objective);
  sp->w_noise = Eigen::VectorXd::Zero(s);
  sp->w_noise(0) = sp->noise_weight.get_d();

  // The noise point must satisfy every row.
  for (int i = 0; i < sp->rows.rows(); ++i)
    if (sp->rows(i, 0) * sp->noise_weight != sp->rhs[i])
      throw ValidationError("noise superchannel violates the cone's affine constraints");
  return sp;
}

int SdpProblem::variable_dimension() const {
  return reduced ? space->free_dimension() : n * (n + 1) / 2;
}

SdpProblem assemble(const PerformanceOperator& omega, const SuperchannelCone& cone, bool reduce) {
  check_matching(omega.task, cone);
  if (omega.omega.labels() != cone.labels())
    throw Error("performance operator labels do not match the cone");
  SdpProblem p;
  p.task = omega.task;
  p.cone = cone;
  p.reduced = reduce;
  p.n = static_cast<int>(omega.omega.dim());
  if (!reduce && p.n > kFullSpaceBudget)
    throw Error("full-space solve of side " + std::to_string(p.n) + " exceeds the budget of " +
                std::to_string(kFullSpaceBudget) + "; use the reduced mode");
  p.space = reduced_space(omega.task, cone);

  const Eigen::MatrixXd re = 0.5 * (omega.omega.matrix().real() +
                                    omega.omega.matrix().real().transpose());
  const auto& alg = *p.space->algebra;
  for (int j = 0; j < alg.symmetric_size(); ++j) {
    const double v = alg.symmetric_element(j).cast<double>().cwiseProduct(re).sum();
    if (std::abs(v - p.space->c(j)) > 1e-9)
      throw NumericalError("performance operator disagrees with the exact objective (coordinate " +
                           std::to_string(j) + ": " + std::to_string(v) + " vs " +
                           std::to_string(p.space->c(j)) + ")");
  }
  if (!reduce) {
    p.objective = re;
    p.constraints = expand_constraints(cone);
  }
  return p;
}

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) {
  const ReducedSpace& sp = *p.space;
  const InvariantAlgebra& alg = *sp.algebra;
  SdpSolution out;
  if (p.reduced) {
    // LMI in the free coordinates: (T/n) 1 + sum_i z_i L(N_i) psd.
    const int r = alg.product_size(), q = sp.free_dimension();
    SdpInstance inst;
    inst.c = (2.0 * sp.noise_weight.get_d()) * Eigen::MatrixXd::Identity(r, r);
    for (int i = 0; i < q; ++i) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r, r);
      for (int j = 0; j < sp.size(); ++j)
        if (sp.nullspace(j, i) != 0.0) a -= sp.nullspace(j, i) * alg.lmi_block(j);
      inst.a.push_back(a.sparseView());
    }
    inst.b = sp.nullspace.transpose() * sp.c;
    const SolverResult res = solve_sdp(inst, opts);
    out.status = res.status;
    out.iterations = res.iterations;
    if (res.y.size() == 0) return out;
    out.y = res.y;
    out.z = res.z;
    out.w = sp.w_noise + sp.nullspace * res.y;
    out.g.resize(sp.size());
    for (int j = 0; j < sp.size(); ++j) out.g(j) = alg.lmi_block(j).cwiseProduct(res.x).sum();
    const double base = sp.c.dot(sp.w_noise);
    out.primal_objective = sp.c.dot(out.w);
    out.dual_objective = base + res.primal_objective;
    out.gap = res.relative_gap;
    out.primal_infeasibility = res.dual_infeasibility;
    out.dual_infeasibility = res.primal_infeasibility;
    out.x = alg.assemble(out.w);
    return out;
  }

  SdpInstance inst;
  inst.c = -p.objective;
  inst.b.resize(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    inst.a.push_back(p.constraints[i].a);
    inst.b(static_cast<Eigen::Index>(i)) = p.constraints[i].b;
  }
  const SolverResult res = solve_sdp(inst, opts);
  out.status = res.status;
  out.iterations = res.iterations;
  if (res.x.size() == 0) return out;
  out.x = res.x;
  out.y = res.y;
  out.z = res.z;
  out.primal_objective = -res.primal_objective;
  out.dual_objective = -res.dual_objective;
  out.gap = res.relative_gap;
  out.primal_infeasibility = res.primal_infeasibility;
  out.dual_infeasibility = res.dual_infeasibility;
  out.w = alg.symmetric_coordinates(res.x);
  out.g.resize(sp.size());
  for (int j = 0; j < sp.size(); ++j)
    out.g(j) = alg.symmetric_element(j).cast<double>().cwiseProduct(res.z).sum();
  return out;
}

namespace {

Eigen::VectorXd multipliers(const ReducedSpace& sp, const Eigen::VectorXd& g) {
  return sp.r.transpose().colPivHouseholderQr().solve(sp.c + g);
}

}  // namespace

DualPoint dual_extract(const SdpProblem& p, const SdpSolution& sol) {
  if (sol.g.size() == 0) throw Error("dual_extract: the problem has not been solved");
  const ReducedSpace& sp = *p.space;
  const InvariantAlgebra& alg = *sp.algebra;
  const Eigen::VectorXd mu = multipliers(sp, sol.g);
  const Eigen::MatrixXd gs = alg.symmetric_gram().cast<double>();
  const Eigen::VectorXd v = gs.ldlt().solve(sp.r.transpose() * mu - sp.c);
  const Eigen::VectorXd omega_w = gs.ldlt().solve(sp.c);
  DualPoint dp;
  dp.lambda = mu.dot(sp.h);
  dp.sbar = alg.assemble(omega_w + v) / dp.lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(alg.lmi(v), Eigen::EigenvaluesOnly);
  dp.min_eigenvalue = es.eigenvalues().minCoeff();
  return dp;
}

TaskReport optimize_task(TaskSpec task, ConeClass cls, const OptimizeOptions& opts) {
  TaskReport rep;
  rep.task = task;
  rep.cone = cone_for(cls, task.d, task.k);
  rep.problem = assemble(omega_build(task), rep.cone, opts.reduce);
  rep.solution = solve(rep.problem, opts.solver);
  if (rep.solution.w.size() == 0)
    throw NumericalError("solver returned no iterate (" + to_string(rep.solution.status) + ")");
  rep.fidelity = rep.solution.value();
  rep.visibility = visibility_from_fidelity(rep.fidelity, task.d);
  if (opts.certify) rep.interval = certify(rep.problem, rep.solution, opts.precision);
  return rep;
}

}  // namespace unitrans
