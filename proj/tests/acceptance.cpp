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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion with the
// measured numbers; details go to stderr. Exit status is nonzero on any FAIL.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include <unsupported/Eigen/KroneckerProduct>

#include "unitrans/errors.hpp"
#include "unitrans/formulas.hpp"
#include "unitrans/groups.hpp"
#include "unitrans/perfop.hpp"
#include "unitrans/sdp.hpp"
#include "unitrans/superchannels.hpp"

using namespace unitrans;

namespace {

// Tolerances, pinned.
constexpr double kK1Tol = 1e-6;
constexpr double kPrecision = 1e-4;
constexpr double kQubitLawTol = 1e-5;
constexpr double kK3Budget = 600.0;  // seconds
constexpr double kSandwichSlack = 1e-8;
constexpr long kMonteCarloSamples = 20000;
constexpr double kMonteCarloSigmas = 5.0;
constexpr double kLinkTol = 1e-12;
constexpr double kCommutantTol = 1e-10;
constexpr double kConeTol = 1e-8;
constexpr int kConeMembers = 50;
constexpr double kTwirlTol = 1e-10;
constexpr double kUniformVariance = 1e-9;
constexpr int kHaarSamples = 50;
constexpr double kRoundTripTol = 1e-7;
constexpr double kCrossTaskTol = 2e-4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

int failures = 0;

void report(const std::string& id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("[%s] %s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
  std::fflush(stdout);
}

void note(const std::string& s) { std::fprintf(stderr, "  %s\n", s.c_str()); }

struct Key {
  Task f;
  int d, k;
  ConeClass c;
  bool operator<(const Key& o) const {
    return std::tie(f, d, k, c) < std::tie(o.f, o.d, o.k, o.c);
  }
};

std::map<Key, TaskReport> reports;

const TaskReport& run(Task f, int d, int k, ConeClass c, bool certify = true) {
  const Key key{f, d, k, c};
  auto it = reports.find(key);
  if (it != reports.end() && (it->second.interval || !certify)) return it->second;
  OptimizeOptions opts;
  opts.certify = certify;
  opts.precision = kPrecision;
  const auto t0 = Clock::now();
  TaskReport rep = optimize_task({f, d, k}, c, opts);
  std::string cert;
  if (rep.interval)
    cert = fmt(" certified [%.9f, %.9f] width %.2e", rep.interval->lower.get_d(),
               rep.interval->upper.get_d(), rep.interval->width());
  note(fmt("%s d=%d k=%d %s: %s F=%.10f%s (%.1fs)", to_string(f).c_str(), d, k,
           to_string(c).c_str(), to_string(rep.solution.status).c_str(), rep.fidelity, cert.c_str(),
           seconds_since(t0)));
  return reports[key] = std::move(rep);
}

const Task kAllTasks[] = {Task::transpose, Task::invert, Task::conjugate};
const ConeClass kAllCones[] = {ConeClass::parallel, ConeClass::sequential, ConeClass::general};

// 1. Single-use optima over every cone.
void k1_optima() {
  bool ok = true;
  double worst_err = 0.0, worst_width = 0.0;
  int n = 0;
  for (Task f : kAllTasks)
    for (int d : {2, 3}) {
      const mpq_class exact =
          f == Task::conjugate ? formulas::f_conj_k1_exact(d) : formulas::f_trans_k1_exact(d);
      for (ConeClass c : kAllCones) {
        const TaskReport& r = run(f, d, 1, c);
        const double err = std::abs(r.fidelity - exact.get_d());
        const CertifiedInterval& ci = *r.interval;
        worst_err = std::max(worst_err, err);
        worst_width = std::max(worst_width, ci.width());
        ok = ok && r.solution.solved() && err <= kK1Tol && ci.width() <= kPrecision &&
             ci.contains(exact) && verify_certificate(r.problem, ci);
        ++n;
      }
    }
  report("1", ok, "k=1 optima",
         fmt("%d instances, max |F - exact| %.2e (tol %.0e), max width %.2e (<= %.0e), "
             "all intervals contain 2/d^2 or 2/(d(d-1)) and re-verify exactly",
             n, worst_err, kK1Tol, worst_width, kPrecision));
}

// 2. Qubit parallel law cos^2(pi/(k+3)).
void qubit_law() {
  bool ok = true;
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    const auto t0 = Clock::now();
    const TaskReport& r = run(Task::transpose, 2, k, ConeClass::parallel);
    const double secs = seconds_since(t0);
    const double law = formulas::f_est_qubit(k);
    const double err = std::abs(r.fidelity - law);
    bool cell = r.solution.solved() && err <= kQubitLawTol && r.problem.reduced;
    if (k == 3) cell = cell && secs <= kK3Budget;
    ok = ok && cell;
    detail += fmt("%sk=%d F=%.8f law %.8f err %.1e", k > 1 ? "; " : "", k, r.fidelity, law, err);
    if (k == 3) detail += fmt(" reduced, %.0fs incl. certification (budget %.0fs)", secs, kK3Budget);
  }
  report("2", ok, "qubit parallel law", detail);
}

// 3. Certified indefinite-causality gap at d=2, k=2.
void causal_gap() {
  bool ok = true;
  std::string detail;
  for (Task f : {Task::transpose, Task::invert}) {
    const TaskReport& seq = run(f, 2, 2, ConeClass::sequential);
    const TaskReport& gen = run(f, 2, 2, ConeClass::general);
    const mpq_class gap = gen.interval->lower - seq.interval->upper;
    const bool cell = sgn(gap) > 0 && seq.interval->width() <= kPrecision &&
                      gen.interval->width() <= kPrecision &&
                      verify_certificate(seq.problem, *seq.interval) &&
                      verify_certificate(gen.problem, *gen.interval);
    ok = ok && cell;
    detail += fmt("%s%s general lower %.6f - sequential upper %.6f = %.6f", detail.empty() ? "" : "; ",
                  to_string(f).c_str(), gen.interval->lower.get_d(), seq.interval->upper.get_d(),
                  gap.get_d());
  }
  report("3", ok, "certified general > sequential", detail);
}

// 4. Analytic sandwich for every solved instance; adds uncertified solves up to
// k=3 at d=2 and k=2 at d=3.
void sandwich() {
  for (Task f : {Task::transpose, Task::invert}) {
    for (int k = 1; k <= 3; ++k) {
      run(f, 2, k, ConeClass::sequential, false);
      run(f, 2, k, ConeClass::parallel, false);
    }
    run(f, 3, 2, ConeClass::sequential, false);
  }
  bool ok = true;
  int checks = 0;
  double margin = 1.0;
  for (const auto& [key, r] : reports) {
    if (!r.solution.solved() || key.f == Task::conjugate) continue;
    if (key.c == ConeClass::sequential) {
      const double lo = key.f == Task::transpose ? formulas::seq_lower_transpose(key.d, key.k)
                                                 : formulas::seq_lower_inverse(key.d, key.k);
      ok = ok && lo <= r.fidelity + kSandwichSlack;
      margin = std::min(margin, r.fidelity - lo);
      ++checks;
    }
    if (key.c == ConeClass::parallel && key.d == 2) {
      ok = ok && r.fidelity <= formulas::par_upper(key.k) + kSandwichSlack;
      margin = std::min(margin, formulas::par_upper(key.k) - r.fidelity);
      ++checks;
    }
  }
  report("4", ok && checks > 0, "bound sandwich",
         fmt("%d checks (sequential lower bounds at d=2,3; parallel upper bound at d=2), "
             "smallest margin %.4f (slack %.0e)",
             checks, margin, kSandwichSlack));
}

// 5. Closed-form performance operator against Monte Carlo.
void omega_oracle() {
  bool ok = true;
  double worst = 0.0;
  int n = 0;
  std::uint64_t seed = 2026;
  auto check = [&](Task f, int d, int k) {
    const TaskSpec t{f, d, k};
    const MonteCarloOmega mc = omega_monte_carlo(t, kMonteCarloSamples, seed++);
    const double dist = (omega_build(t).omega.matrix() - mc.omega.omega.matrix()).norm();
    const double ratio = dist / mc.stderr_frobenius;
    worst = std::max(worst, ratio);
    ok = ok && dist <= kMonteCarloSigmas * mc.stderr_frobenius;
    ++n;
    note(fmt("omega %s d=%d k=%d: |build - mc|_F = %.3e, stderr %.3e", to_string(f).c_str(), d, k,
             dist, mc.stderr_frobenius));
  };
  for (Task f : kAllTasks)
    for (int k = 1; k <= 2; ++k) check(f, 2, k);
  for (Task f : kAllTasks) check(f, 3, 1);
  report("5", ok, "omega vs Monte Carlo",
         fmt("%d operators, N=%ld, worst distance %.2f stderr (limit %.0f)", n, kMonteCarloSamples,
             worst, kMonteCarloSigmas));
}

// 6. Property suites.
CMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = cplx(g(rng), g(rng));
  return m;
}

LabeledOperator random_op(const std::vector<SpaceLabel>& ls, std::mt19937_64& rng) {
  int n = 1;
  for (const auto& l : ls) n *= l.dim;
  return LabeledOperator(ls, random_matrix(n, rng));
}

std::pair<double, double> link_properties() {
  std::mt19937_64 rng(9);
  double comm = 0.0, assoc = 0.0;
  const std::vector<std::string> pool{"P", "I1", "I2", "O1", "F", "AUX0"};
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<SpaceLabel> la, lb;
    for (const auto& name : pool) {
      const int dim = 2 + static_cast<int>((name.size() + rep) % 2);
      const int r = static_cast<int>(rng() % 4);
      if (r == 0 || r == 2) la.push_back({name, dim});
      if (r == 1 || r == 2) lb.push_back({name, dim});
    }
    if (la.empty()) la.push_back({"AUX3", 2});
    if (lb.empty()) lb.push_back({"AUX4", 2});
    const auto a = random_op(la, rng), b = random_op(lb, rng);
    const auto ab = link_product(a, b);
    comm = std::max(comm, ab.distance(link_product(b, a)) / std::max(1.0, ab.matrix().cwiseAbs().maxCoeff()));
  }
  for (int rep = 0; rep < 100; ++rep) {
    const int da = 1 + static_cast<int>(rng() % 2);
    const auto a = random_op({{"P", 2}, {"I1", 2}, {"AUX0", da}}, rng);
    const auto b = random_op({{"I1", 2}, {"O1", 2}}, rng);
    const auto c = random_op({{"O1", 2}, {"P", 2}, {"F", 2}}, rng);
    const auto lhs = link_product(a, link_product(b, c));
    const auto rhs = link_product(link_product(a, b), c);
    assoc = std::max(assoc, lhs.distance(rhs) / std::max(1.0, lhs.matrix().cwiseAbs().maxCoeff()));
  }
  return {comm, assoc};
}

std::pair<double, double> commutant_properties() {
  double ortho = 0.0, resid = 0.0;
  auto check = [&](const CommutantBasis& b, const std::vector<bool>& conj, int d) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      ortho = std::max(ortho, std::abs(b.elements[i].matrix().squaredNorm() - b.norms[i]) / b.norms[i]);
      for (std::size_t j = 0; j < i; ++j) {
        const cplx ip = (b.elements[i].matrix().adjoint() * b.elements[j].matrix()).trace();
        ortho = std::max(ortho, std::abs(ip) / std::sqrt(b.norms[i] * b.norms[j]));
      }
    }
    for (int s = 0; s < 20; ++s) {
      const CMatrix u = haar_unitary(d, 700 + s).matrix();
      CMatrix g = CMatrix::Ones(1, 1);
      for (bool c : conj) g = Eigen::kroneckerProduct(g, c ? CMatrix(u.conjugate()) : u).eval();
      for (const auto& p : b.elements) resid = std::max(resid, (p.matrix() * g - g * p.matrix()).norm());
    }
  };
  for (int d : {2, 3})
    for (int n : {2, 3}) check(collective_commutant(d, n), std::vector<bool>(n, false), d);
  for (const auto& [d, k] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 3}}) {
    std::vector<bool> conj(k + 1, true);
    conj.back() = false;
    check(conjugate_collective_commutant(d, k), conj, d);
  }
  return {ortho, resid};
}

bool cone_containment(int& members) {
  const auto par = cone_parallel(2, 2);
  const auto seq = cone_sequential(2, 2);
  const auto rev = cone_sequential(2, 2, {2, 1});
  const auto gen = cone_general_k2(2);
  bool ok = true;
  for (int s = 0; s < kConeMembers; ++s) {
    const auto p = random_parallel_member(2, 2, s);
    ok = ok && validate(p, par, kConeTol).passed && validate(p, seq, kConeTol).passed &&
         validate(p, rev, kConeTol).passed && validate(p, gen, kConeTol).passed;
    const auto q = random_sequential_member(2, 2, 1000 + s);
    ok = ok && validate(q, seq, kConeTol).passed && validate(q, gen, kConeTol).passed;
    const auto r = random_sequential_member(2, 2, 2000 + s, {2, 1});
    ok = ok && validate(r, rev, kConeTol).passed && validate(r, gen, kConeTol).passed;
    members += 3;
  }
  return ok;
}

std::pair<double, double> twirl_properties() {
  double pres = 0.0, var = 0.0;
  for (Task f : kAllTasks) {
    const TaskSpec t{f, 2, 2};
    const PerformanceOperator om = omega_build(t);
    for (int s = 0; s < kConeMembers; ++s) {
      const auto m = random_parallel_member(2, 2, 3000 + s);
      const auto tw = twirl(m, t);
      pres = std::max(pres, std::abs(average_fidelity(tw, om) - average_fidelity(m, om)));
      if (s < 3) {
        double mean = 0.0, sq = 0.0;
        for (int i = 0; i < kHaarSamples; ++i) {
          const double x = fidelity_at_unitary(tw, haar_unitary(2, 5000 + 100 * s + i), t);
          mean += x;
          sq += x * x;
        }
        mean /= kHaarSamples;
        var = std::max(var, sq / kHaarSamples - mean * mean);
      }
    }
  }
  return {pres, var};
}

std::pair<double, double> round_trips() {
  double di = 0.0, par = 0.0;
  for (Task f : {Task::transpose, Task::invert})
    for (int k = 1; k <= 2; ++k) {
      const auto s = twirl(random_sequential_member(2, k, 60 + k), {f, 2, k});
      di = std::max(di, delayed_input_form(s, k).superchannel().distance(s));
    }
  for (int k = 1; k <= 2; ++k) {
    const auto s = twirl(random_sequential_member(2, k, 70 + k), {Task::conjugate, 2, k});
    const ParallelForm pf = parallelize_covariant(s, k);
    if (!validate(pf.superchannel, cone_parallel(2, k), kConeTol).passed) return {di, 1.0};
    for (int i = 0; i < 20; ++i) {
      const CMatrix u = haar_unitary(2, 800 + i).matrix();
      par = std::max(par, apply_superchannel(pf.superchannel, u, k)
                              .distance(apply_superchannel(s, u, k)));
    }
  }
  return {di, par};
}

void properties() {
  const auto [comm, assoc] = link_properties();
  const auto [ortho, resid] = commutant_properties();
  int members = 0;
  const bool cones = cone_containment(members);
  const auto [pres, var] = twirl_properties();
  const auto [di, par] = round_trips();
  const bool ok = comm <= kLinkTol && assoc <= kLinkTol && ortho <= kCommutantTol &&
                  resid <= kCommutantTol && cones && pres <= kTwirlTol && var <= kUniformVariance &&
                  di <= kRoundTripTol && par <= kRoundTripTol;
  report("6", ok, "property suites",
         fmt("link comm %.1e assoc %.1e; commutant ortho %.1e resid %.1e; cones %s over %d "
             "members; twirl |dF| %.1e, variance %.1e; delayed-input %.1e, parallelized %.1e",
             comm, assoc, ortho, resid, cones ? "nested" : "NOT nested", members, pres, var, di,
             par));
}

// 7. Transposition and inversion coincide at k=1.
void cross_task() {
  bool ok = true;
  double worst = 0.0;
  for (int d : {2, 3})
    for (ConeClass c : kAllCones) {
      const CertifiedInterval& t = *run(Task::transpose, d, 1, c).interval;
      const CertifiedInterval& i = *run(Task::invert, d, 1, c).interval;
      const double dl = std::abs(mpq_class(t.lower - i.lower).get_d());
      const double du = std::abs(mpq_class(t.upper - i.upper).get_d());
      worst = std::max({worst, dl, du});
      ok = ok && dl <= kCrossTaskTol && du <= kCrossTaskTol;
    }
  report("7", ok, "transpose = invert at k=1",
         fmt("largest certified endpoint difference %.2e over d=2,3 and all cones (tol %.0e)", worst,
             kCrossTaskTol));
}

// Stretch: d=3, k=2 in the reduced space only.
void stretch() {
  std::string detail;
  bool ok = true;
  bool skipped = false;
  for (Task f : kAllTasks)
    for (ConeClass c : kAllCones) {
      const auto space = reduced_space({f, 3, 2}, cone_for(c, 3, 2));
      const std::string dims =
          fmt("basis %d, free %d, lmi %d, rows %d", space->size(), space->free_dimension(),
              space->lmi_size(), static_cast<int>(space->rows.rows()));
      try {
        const TaskReport& r = run(f, 3, 2, c);
        ok = ok && r.solution.solved() && verify_certificate(r.problem, *r.interval) &&
             r.interval->width() <= kPrecision;
        if (c != ConeClass::parallel)
          detail += fmt("%s%s %s [%.6f, %.6f] (%s)", detail.empty() ? "" : "; ",
                        to_string(f).c_str(), to_string(c).c_str(), r.interval->lower.get_d(),
                        r.interval->upper.get_d(), dims.c_str());
      } catch (const Error& e) {
        skipped = true;
        detail += fmt("%s%s %s skipped: %s (%s)", detail.empty() ? "" : "; ", to_string(f).c_str(),
                      to_string(c).c_str(), e.what(), dims.c_str());
      }
    }
  for (Task f : {Task::transpose, Task::invert}) {
    const auto p = reports.find({f, 3, 2, ConeClass::parallel});
    const auto s = reports.find({f, 3, 2, ConeClass::sequential});
    const auto g = reports.find({f, 3, 2, ConeClass::general});
    if (p != reports.end() && s != reports.end() && g != reports.end())
      ok = ok && p->second.fidelity <= s->second.fidelity + kSandwichSlack &&
           s->second.fidelity <= g->second.fidelity + kSandwichSlack;
  }
  if (skipped) {
    std::printf("[SKIP] stretch d=3 k=2: %s\n", detail.c_str());
    return;
  }
  report("stretch", ok, "d=3 k=2 sequential/general (reduced)", detail);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::pair<const char*, std::function<void()>> steps[] = {
      {"1", k1_optima},  {"2", qubit_law},  {"3", causal_gap}, {"4", sandwich},
      {"5", omega_oracle}, {"6", properties}, {"7", cross_task}, {"stretch", stretch}};
  for (const auto& [id, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      report(id, false, "aborted", e.what());
    }
  }
  std::printf("acceptance: %d failing, %.0fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
