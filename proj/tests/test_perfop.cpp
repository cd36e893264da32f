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

#include "unitrans/perfop.hpp"

using namespace unitrans;

namespace {

LabeledOperator on(const std::string& name, const CMatrix& m) {
  return LabeledOperator({{name, static_cast<int>(m.rows())}}, m);
}

// A on every label in `a`, conj(A) on those flagged; same for B.
LabeledOperator product_action(const std::vector<std::pair<std::string, bool>>& a,
                               const CMatrix& ua,
                               const std::vector<std::pair<std::string, bool>>& b,
                               const CMatrix& ub) {
  LabeledOperator g = on(a[0].first, a[0].second ? CMatrix(ua.conjugate()) : ua);
  for (std::size_t i = 1; i < a.size(); ++i)
    g = tensor(g, on(a[i].first, a[i].second ? CMatrix(ua.conjugate()) : ua));
  for (const auto& [name, c] : b) g = tensor(g, on(name, c ? CMatrix(ub.conjugate()) : ub));
  return g;
}

// Group actions that leave Omega invariant, per task.
LabeledOperator invariance_action(Task t, int k, const CMatrix& a, const CMatrix& b) {
  std::vector<std::pair<std::string, bool>> ga, gb;
  auto add = [&](std::vector<std::pair<std::string, bool>>& g, const std::string& prefix,
                 bool conj) {
    for (int j = 1; j <= k; ++j) g.push_back({prefix + std::to_string(j), conj});
  };
  switch (t) {
    case Task::transpose:
      add(ga, "O", true), ga.push_back({"P", false});
      add(gb, "I", true), gb.push_back({"F", false});
      break;
    case Task::invert:
      add(ga, "O", false), ga.push_back({"P", false});
      add(gb, "I", false), gb.push_back({"F", false});
      break;
    case Task::conjugate:
      add(ga, "I", false), ga.push_back({"P", false});
      add(gb, "O", false), gb.push_back({"F", false});
      break;
    case Task::identity:
      add(ga, "I", true), ga.push_back({"P", false});
      add(gb, "O", true), gb.push_back({"F", false});
      break;
  }
  return product_action(ga, a, gb, b);
}

LabeledOperator maximally_entangled(int d, const std::string& a, const std::string& b) {
  return choi_of_unitary(CMatrix::Identity(d, d), a, b);
}

LabeledOperator identity_on(int d, const std::string& a, const std::string& b) {
  return LabeledOperator::identity({{a, d}, {b, d}});
}

LabeledOperator flip_on(int d, const std::string& a, const std::string& b) {
  return partial_transpose(maximally_entangled(d, a, b), {b});
}

double frob(const LabeledOperator& a, const LabeledOperator& b) {
  return (a.matrix() - b.matrix()).norm();
}

LabeledOperator noise(int d, int k) {
  auto ls = superchannel_labels(d, k);
  return std::pow(double(d), -(k + 1)) * LabeledOperator::identity(ls);
}

const std::vector<Task> kAllTasks{Task::conjugate, Task::transpose, Task::invert,
                                  Task::identity};

}  // namespace

TEST(TaskSpec, Parsing) {
  for (Task t : kAllTasks) EXPECT_EQ(task_from_string(to_string(t)), t);
  EXPECT_THROW(task_from_string("square"), Error);
  EXPECT_THROW(omega_build({Task::transpose, 1, 1}), Error);
  EXPECT_THROW(omega_build({Task::transpose, 2, 0}), Error);
  EXPECT_THROW(omega_build({Task::transpose, 2, kMaxUses + 1}), Error);
}

TEST(Omega, ConjugationK1ClosedForm) {
  for (int d : {2, 3}) {
    const auto w = omega_build({Task::conjugate, d, 1});
    const auto one_ip = identity_on(d, "I1", "P"), f_ip = flip_on(d, "I1", "P");
    const auto one_of = identity_on(d, "O1", "F"), f_of = flip_on(d, "O1", "F");
    const double ds = (d * d + d) / 2.0, da = (d * d - d) / 2.0;
    const auto expect =
        (1.0 / (d * d)) * ((1.0 / ds) * tensor(0.5 * (one_ip + f_ip), 0.5 * (one_of + f_of)) +
                           (1.0 / da) * tensor(0.5 * (one_ip - f_ip), 0.5 * (one_of - f_of)));
    EXPECT_LT(w.omega.distance(expect), 1e-12);
  }
}

TEST(Omega, TranspositionK1ClosedForm) {
  for (int d : {2, 3}) {
    const auto w = omega_build({Task::transpose, d, 1});
    const auto pp_op = (1.0 / d) * maximally_entangled(d, "O1", "P");
    const auto pp_if = (1.0 / d) * maximally_entangled(d, "I1", "F");
    const auto pq_op = identity_on(d, "O1", "P") - pp_op;
    const auto pq_if = identity_on(d, "I1", "F") - pp_if;
    const auto expect = (1.0 / (d * d)) *
                        (tensor(pp_op, pp_if) + (1.0 / (d * d - 1.0)) * tensor(pq_op, pq_if));
    EXPECT_LT(w.omega.distance(expect), 1e-12);
  }
}

TEST(Omega, InversionK1ClosedForm) {
  for (int d : {2, 3}) {
    const auto w = omega_build({Task::invert, d, 1});
    const auto one_op = identity_on(d, "O1", "P"), f_op = flip_on(d, "O1", "P");
    const auto one_if = identity_on(d, "I1", "F"), f_if = flip_on(d, "I1", "F");
    const double ds = (d * d + d) / 2.0, da = (d * d - d) / 2.0;
    const auto expect =
        (1.0 / (d * d)) * ((1.0 / ds) * tensor(0.5 * (one_op + f_op), 0.5 * (one_if + f_if)) +
                           (1.0 / da) * tensor(0.5 * (one_op - f_op), 0.5 * (one_if - f_if)));
    EXPECT_LT(w.omega.distance(expect), 1e-12);
  }
}

TEST(Omega, StructuralInvariants) {
  for (Task t : kAllTasks)
    for (int d : {2, 3})
      for (int k : {1, 2}) {
        const auto w = omega_build({t, d, k});
        EXPECT_NEAR(w.omega.trace().real(), std::pow(double(d), k - 1), 1e-9);
        EXPECT_LE(w.omega.hermiticity_residual(), 1e-12);
        EXPECT_GE(w.omega.min_eigenvalue(), -1e-10);
        EXPECT_EQ(w.omega.matrix().imag().cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(w.omega.labels(), superchannel_labels(d, k));
      }
}

TEST(Omega, CommutesWithTaskSymmetry) {
  for (Task t : kAllTasks)
    for (int k : {1, 2}) {
      const int d = 2;
      const auto w = omega_build({t, d, k});
      double worst = 0.0;
      for (int s = 0; s < 20; ++s) {
        const CMatrix a = haar_unitary(d, 10 + s).matrix();
        const CMatrix b = haar_unitary(d, 90 + s).matrix();
        const auto g = invariance_action(t, k, a, b);
        worst = std::max(worst, (w.omega.matrix() * g.matrix() - g.matrix() * w.omega.matrix())
                                    .cwiseAbs()
                                    .maxCoeff());
      }
      EXPECT_LE(worst, 1e-10) << to_string(t) << " k=" << k;
    }
}

TEST(Omega, HomomorphicSingleUnitaryRelation) {
  // [Omega, 1_P (x) 1_I (x) U*_O^(x)k (x) f(U)_F] = 0 for conjugate and identity.
  for (Task t : {Task::conjugate, Task::identity}) {
    const int d = 2, k = 2;
    const auto w = omega_build({t, d, k});
    for (int s = 0; s < 20; ++s) {
      const CMatrix u = haar_unitary(d, 300 + s).matrix();
      auto g = tensor(LabeledOperator::identity({{"P", d}, {"I1", d}, {"I2", d}}),
                      tensor(on("O1", u.conjugate()), on("O2", u.conjugate())));
      g = tensor(g, on("F", apply_task(t, u)));
      EXPECT_LE((w.omega.matrix() * g.matrix() - g.matrix() * w.omega.matrix()).norm(), 1e-10);
    }
  }
}

TEST(Omega, PairingWithSeedIsExact) {
  // Omega is the Haar average of the seed, so tr(E Omega) = tr(E seed) for any
  // invariant E; Omega itself is one.
  for (Task t : kAllTasks)
    for (int k : {1, 2}) {
      const auto w = omega_build({t, 2, k});
      const auto seed = omega_seed(2, k);
      const double lhs = (w.omega.matrix() * w.omega.matrix()).trace().real();
      const double rhs = (w.omega.matrix() * seed.matrix()).trace().real();
      EXPECT_NEAR(lhs, rhs, 1e-12) << to_string(t) << " k=" << k;
    }
}

TEST(MonteCarlo, AgreesWithBuild) {
  struct Case {
    Task t;
    int d, k;
  };
  std::vector<Case> cases;
  for (Task t : kAllTasks)
    for (int k : {1, 2}) cases.push_back({t, 2, k});
  for (Task t : kAllTasks) cases.push_back({t, 3, 1});
  for (const auto& c : cases) {
    const TaskSpec spec{c.t, c.d, c.k};
    const auto mc = omega_monte_carlo(spec, 20000, 17);
    const auto exact = omega_build(spec);
    const double dist = frob(mc.omega.omega, exact.omega);
    EXPECT_LE(dist, 5.0 * mc.stderr_frobenius)
        << to_string(c.t) << " d=" << c.d << " k=" << c.k;
    EXPECT_LE(mc.omega.omega.hermiticity_residual(), 1e-15);
    EXPECT_NEAR(mc.omega.omega.trace().real(), std::pow(double(c.d), c.k - 1), 1e-9);
  }
}

TEST(MonteCarlo, CallbackOverridesTask) {
  const TaskSpec spec{Task::identity, 2, 1};
  const auto a = omega_monte_carlo(spec, 50, 3);
  const auto b = omega_monte_carlo({Task::transpose, 2, 1}, 50, 3,
                                   [](const CMatrix& u) { return CMatrix(u); });
  EXPECT_LT(a.omega.omega.distance(b.omega.omega), 1e-15);
}

TEST(Fidelity, NoiseGivesInverseDSquared) {
  for (Task t : kAllTasks)
    for (int d : {2, 3}) {
      const auto w = omega_build({t, d, 1});
      EXPECT_NEAR(average_fidelity(noise(d, 1), w), 1.0 / (d * d), 1e-12);
    }
}

TEST(Fidelity, LabelMismatchIsError) {
  const auto w = omega_build({Task::transpose, 2, 1});
  EXPECT_THROW(average_fidelity(noise(2, 2), w), Error);
}

TEST(Fidelity, WireCombPointwiseAndAverage) {
  // S = |1>><<1|_{P I1} (x) |1>><<1|_{O1 F} routes U to the output unchanged.
  const int d = 2;
  const auto s = tensor(maximally_entangled(d, "P", "I1"), maximally_entangled(d, "O1", "F"));
  const TaskSpec ident{Task::identity, d, 1};
  EXPECT_NEAR(fidelity_at_unitary(s, UnitaryMatrix(CMatrix::Identity(d, d)), ident), 1.0, 1e-12);
  EXPECT_NEAR(average_fidelity(s, omega_build(ident)), 1.0, 1e-12);

  // Sampled mean of pointwise fidelities agrees with tr(S Omega).
  for (Task t : {Task::transpose, Task::conjugate, Task::invert}) {
    const TaskSpec spec{t, d, 1};
    const int n = 1000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = fidelity_at_unitary(s, haar_unitary(d, 4000 + i), spec);
      sum += f;
      sumsq += f * f;
    }
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / (n - 1));
    EXPECT_LE(std::abs(mean - average_fidelity(s, omega_build(spec))), 3.0 * se + 1e-12)
        << to_string(t);
  }
}

TEST(Visibility, Examples) {
  EXPECT_NEAR(visibility_from_fidelity(1.0, 2), 1.0, 1e-15);
  EXPECT_NEAR(visibility_from_fidelity(0.25, 2), 0.0, 1e-15);
  EXPECT_NEAR(visibility_from_fidelity(0.5, 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(fidelity_from_visibility(1.0 / 3.0, 2), 0.5, 1e-15);
  EXPECT_THROW(visibility_from_fidelity(0.1, 2), Error);
  EXPECT_THROW(visibility_from_fidelity(1.1, 2), Error);
  EXPECT_THROW(fidelity_from_visibility(-0.5, 3), Error);
}
