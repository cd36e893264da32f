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

#include <gtest/gtest.h>

#include <cmath>

#include "unitrans/errors.hpp"
#include "unitrans/formulas.hpp"
#include "unitrans/sdp.hpp"

using namespace unitrans;

namespace {

const Task kTasks[] = {Task::conjugate, Task::transpose, Task::invert};
const ConeClass kCones[] = {ConeClass::parallel, ConeClass::sequential, ConeClass::general};

SdpSolution solved(TaskSpec t, ConeClass c, bool reduce, SdpProblem* out = nullptr) {
  SdpProblem p = assemble(omega_build(t), cone_for(c, t.d, t.k), reduce);
  SdpSolution s = solve(p);
  EXPECT_TRUE(s.solved()) << to_string(t.f) << " k=" << t.k << " " << to_string(c) << " "
                          << to_string(s.status);
  if (out) *out = std::move(p);
  return s;
}

}  // namespace

TEST(SdpSolver, SmallestEigenvalue) {
  // min <C, X> s.t. tr X = 1 is the smallest eigenvalue of C.
  Eigen::MatrixXd c(3, 3);
  c << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  SdpInstance inst;
  inst.c = c;
  inst.a.push_back(Eigen::MatrixXd::Identity(3, 3).sparseView());
  inst.b = Eigen::VectorXd::Ones(1);
  const SolverResult r = solve_sdp(inst);
  ASSERT_EQ(r.status, SolverStatus::optimal);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  EXPECT_NEAR(r.primal_objective, es.eigenvalues()(0), 1e-8);
  EXPECT_NEAR(r.dual_objective, es.eigenvalues()(0), 1e-8);
}

TEST(SdpSolver, InfeasibleIsNotOptimal) {
  SdpInstance inst;
  inst.c = Eigen::MatrixXd::Identity(2, 2);
  inst.a.push_back(Eigen::MatrixXd::Identity(2, 2).sparseView());
  inst.b = -Eigen::VectorXd::Ones(1);
  EXPECT_NE(solve_sdp(inst).status, SolverStatus::optimal);
}

TEST(Assemble, ReducedDimensionQubitTranspose) {
  const TaskSpec t{Task::transpose, 2, 1};
  const auto om = omega_build(t);
  const SdpProblem red = assemble(om, cone_parallel(2, 1), true);
  const SdpProblem full = assemble(om, cone_parallel(2, 1), false);
  EXPECT_EQ(full.n, 16);
  EXPECT_LE(red.space->size(), 10);
  EXPECT_LE(red.variable_dimension(), 10);
}

TEST(Assemble, RejectsNegativeTrace) {
  SuperchannelCone cone = cone_parallel(2, 1);
  cone.trace = -1.0;
  EXPECT_THROW(assemble(omega_build({Task::transpose, 2, 1}), cone), ValidationError);
}

TEST(Assemble, RejectsMismatchedDimensions) {
  EXPECT_THROW(assemble(omega_build({Task::transpose, 2, 1}), cone_parallel(3, 1)), Error);
  EXPECT_THROW(assemble(omega_build({Task::transpose, 2, 1}), cone_parallel(2, 2)), Error);
}

TEST(Solve, KnownQubitValues) {
  EXPECT_NEAR(solved({Task::transpose, 2, 1}, ConeClass::parallel, true).value(), 0.5, 1e-7);
  EXPECT_NEAR(solved({Task::conjugate, 2, 1}, ConeClass::parallel, true).value(), 1.0, 1e-7);
  EXPECT_NEAR(solved({Task::transpose, 2, 2}, ConeClass::parallel, true).value(),
              formulas::f_est_qubit(2), 1e-6);
}

TEST(Solve, ReducedMatchesFull) {
  for (Task f : kTasks)
    for (int k = 1; k <= 2; ++k)
      for (ConeClass c : kCones) {
        const TaskSpec t{f, 2, k};
        const double r = solved(t, c, true).value();
        const double full = solved(t, c, false).value();
        EXPECT_NEAR(r, full, 1e-6) << to_string(f) << " k=" << k << " " << to_string(c);
      }
}

TEST(Solve, OptimizerIsConeMember) {
  for (Task f : kTasks)
    for (ConeClass c : kCones)
      for (bool reduce : {true, false}) {
        const TaskSpec t{f, 2, 2};
        SdpProblem p;
        const SdpSolution s = solved(t, c, reduce, &p);
        const LabeledOperator x(p.cone.labels(), s.x.cast<cplx>());
        const ValidationReport r = validate(x, p.cone, 1e-7);
        EXPECT_TRUE(r.passed) << to_string(f) << " " << to_string(c) << " reduce=" << reduce
                              << " " << r.max_affine_residual << " " << r.min_eigenvalue;
        EXPECT_NEAR(average_fidelity(x, omega_build(t)), s.value(), 1e-7);
      }
}

TEST(Solve, WeakDualityAndDualExtraction) {
  for (Task f : kTasks)
    for (ConeClass c : kCones) {
      SdpProblem p;
      const SdpSolution s = solved({f, 2, 2}, c, true, &p);
      EXPECT_GE(s.dual_objective, s.value() - 1e-8);
      const DualPoint dp = dual_extract(p, s);
      EXPECT_GE(dp.lambda, s.value() - 1e-8);
      EXPECT_GE(dp.min_eigenvalue, -1e-9);
    }
  SdpProblem p = assemble(omega_build({Task::transpose, 2, 1}), cone_parallel(2, 1));
  EXPECT_THROW(dual_extract(p, SdpSolution{}), Error);
}

TEST(Solve, DualOfTransposeK1) {
  SdpProblem p;
  const SdpSolution s = solved({Task::transpose, 2, 1}, ConeClass::parallel, true, &p);
  EXPECT_NEAR(dual_extract(p, s).lambda, 0.5, 1e-7);
}

TEST(Solve, MonotoneAcrossCones) {
  for (Task f : kTasks) {
    const TaskSpec t{f, 2, 2};
    const double par = solved(t, ConeClass::parallel, true).value();
    const double seq = solved(t, ConeClass::sequential, true).value();
    const double gen = solved(t, ConeClass::general, true).value();
    EXPECT_LE(par, seq + 1e-8) << to_string(f);
    EXPECT_LE(seq, gen + 1e-8) << to_string(f);
  }
}

TEST(Certify, ContainsExactValues) {
  struct Case {
    TaskSpec t;
    mpq_class exact;
  };
  for (const auto& c : {Case{{Task::transpose, 2, 1}, mpq_class(1, 2)},
                        Case{{Task::conjugate, 2, 1}, mpq_class(1)},
                        Case{{Task::invert, 3, 1}, mpq_class(2, 9)}}) {
    SdpProblem p;
    const SdpSolution s = solved(c.t, ConeClass::parallel, true, &p);
    const CertifiedInterval ci = certify(p, s, 1e-4);
    EXPECT_TRUE(ci.contains(c.exact)) << ci.lower.get_d() << " " << ci.upper.get_d();
    EXPECT_LE(ci.width(), 1e-4);
    EXPECT_TRUE(verify_certificate(p, ci));
  }
}

TEST(Certify, QubitEstimationK2) {
  SdpProblem p;
  const SdpSolution s = solved({Task::transpose, 2, 2}, ConeClass::parallel, true, &p);
  const CertifiedInterval ci = certify(p, s, 1e-4);
  const long double v = std::cos(3.14159265358979323846264338327950288L / 5);
  EXPECT_LE(ci.lower.get_d(), static_cast<double>(v * v) + 1e-15);
  EXPECT_GE(ci.upper.get_d(), static_cast<double>(v * v) - 1e-15);
  EXPECT_LE(ci.width(), 1e-4);
  EXPECT_LE(ci.lower.get_d(), s.value() + 1e-12);
  EXPECT_GE(ci.upper.get_d(), s.value() - 1e-12);
}

TEST(Certify, FullSolveCertifiesInReducedSpace) {
  SdpProblem p;
  const SdpSolution s = solved({Task::invert, 2, 2}, ConeClass::general, false, &p);
  const CertifiedInterval ci = certify(p, s, 1e-4);
  EXPECT_TRUE(verify_certificate(p, ci));
  EXPECT_LE(ci.width(), 1e-4);
}

TEST(Certify, TamperedCertificateFails) {
  SdpProblem p;
  const SdpSolution s = solved({Task::transpose, 2, 1}, ConeClass::parallel, true, &p);
  CertifiedInterval ci = certify(p, s);
  ASSERT_TRUE(verify_certificate(p, ci));
  CertifiedInterval up = ci;
  up.upper -= mpq_class(1, 1000);
  EXPECT_FALSE(verify_certificate(p, up));
  CertifiedInterval lo = ci;
  lo.primal_point[0] += mpq_class(1, 1000);
  EXPECT_FALSE(verify_certificate(p, lo));
  CertifiedInterval infl = ci;
  infl.inflation = -1;
  EXPECT_FALSE(verify_certificate(p, infl));
}

TEST(Certify, RejectsUnsolved) {
  const SdpProblem p = assemble(omega_build({Task::transpose, 2, 1}), cone_parallel(2, 1));
  EXPECT_THROW(certify(p, SdpSolution{}), Error);
}

TEST(OptimizeTask, QubitK1ConesCoincide) {
  for (ConeClass c : kCones) {
    const TaskReport r = optimize_task({Task::transpose, 2, 1}, c);
    EXPECT_NEAR(r.fidelity, 0.5, 1e-7);
    EXPECT_NEAR(r.visibility, 1.0 / 3.0, 1e-6);
    ASSERT_TRUE(r.interval.has_value());
    EXPECT_TRUE(r.interval->contains(mpq_class(1, 2)));
  }
}

TEST(OptimizeTask, GeneralBeatsSequentialCertified) {
  for (Task f : {Task::transpose, Task::invert}) {
    const TaskReport seq = optimize_task({f, 2, 2}, ConeClass::sequential);
    const TaskReport gen = optimize_task({f, 2, 2}, ConeClass::general);
    EXPECT_GT(gen.interval->lower, seq.interval->upper) << to_string(f);
  }
}
