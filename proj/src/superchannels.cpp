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

#include "unitrans/superchannels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "unitrans/detail/tensor_ops.hpp"
#include "unitrans/groups.hpp"
#include "unitrans/symmetry.hpp"

namespace unitrans {

std::string to_string(ConeClass c) {
  switch (c) {
    case ConeClass::parallel:
      return "parallel";
    case ConeClass::sequential:
      return "sequential";
    case ConeClass::general:
      return "general";
  }
  return "?";
}

ConeClass cone_class_from_string(const std::string& s) {
  if (s == "parallel") return ConeClass::parallel;
  if (s == "sequential") return ConeClass::sequential;
  if (s == "general") return ConeClass::general;
  throw Error("unknown cone '" + s + "' (expected parallel, sequential or general)");
}

std::string TraceReplaceIdentity::describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    if (!first) os << (t.coeff < 0 ? " - " : " + ");
    else if (t.coeff < 0) os << "-";
    if (std::abs(t.coeff) != 1) os << std::abs(t.coeff) << "*";
    os << "_{";
    for (std::size_t i = 0; i < t.spaces.size(); ++i) os << (i ? "," : "") << t.spaces[i];
    os << "}S";
    first = false;
  }
  os << " = 0";
  return os.str();
}

std::vector<std::string> TraceReplaceIdentity::common_spaces() const {
  if (terms.empty()) return {};
  std::vector<std::string> out = terms.front().spaces;
  for (const auto& t : terms) {
    std::vector<std::string> keep;
    for (const auto& s : out)
      if (std::find(t.spaces.begin(), t.spaces.end(), s) != t.spaces.end()) keep.push_back(s);
    out.swap(keep);
  }
  return out;
}

std::string SuperchannelCone::name() const {
  std::string s = to_string(kind);
  if (kind == ConeClass::sequential && !slot_order.empty()) {
    s += "[";
    for (std::size_t i = 0; i < slot_order.size(); ++i)
      s += (i ? "," : "") + std::to_string(slot_order[i]);
    s += "]";
  }
  return s;
}

namespace {

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

TraceReplaceIdentity equal(std::vector<std::string> lhs, std::vector<std::string> rhs) {
  return {{{1, std::move(lhs)}, {-1, std::move(rhs)}}};
}

std::string slot(const std::string& prefix, int j) { return prefix + std::to_string(j); }

void check_dk(int d, int k) {
  if (d < 2) throw Error("cone dimension must be >= 2");
  if (k < 1) throw Error("cone needs k >= 1 slots");
}

double default_trace(int d, int k) { return std::pow(double(d), k + 1); }

}  // namespace

SuperchannelCone cone_parallel(int d, int k) {
  check_dk(d, k);
  SuperchannelCone c;
  c.kind = ConeClass::parallel;
  c.d = d;
  c.k = k;
  const auto in = input_names(k), out = output_names(k);
  c.identities.push_back(equal({"F"}, join({out, {"F"}})));
  c.identities.push_back(equal(join({in, out, {"F"}}), join({{"P"}, in, out, {"F"}})));
  c.trace = default_trace(d, k);
  return c;
}

SuperchannelCone cone_sequential(int d, int k, std::vector<int> order) {
  check_dk(d, k);
  if (order.empty()) {
    order.resize(k);
    std::iota(order.begin(), order.end(), 1);
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < k; ++i)
    if (static_cast<int>(sorted.size()) != k || sorted[i] != i + 1)
      throw Error("slot order must be a permutation of 1..k");
  SuperchannelCone c;
  c.kind = ConeClass::sequential;
  c.d = d;
  c.k = k;
  c.slot_order = order;
  // _F S = _{O_last F} S, then walk back through the slots.
  std::vector<std::string> tail{"F"};
  c.identities.push_back(equal(tail, join({{slot("O", order[k - 1])}, tail})));
  for (int j = k - 1; j >= 0; --j) {
    tail = join({{slot("I", order[j]), slot("O", order[j])}, tail});
    const std::string before = j > 0 ? slot("O", order[j - 1]) : "P";
    c.identities.push_back(equal(tail, join({{before}, tail})));
  }
  c.trace = default_trace(d, k);
  return c;
}

SuperchannelCone cone_general_k2(int d) {
  check_dk(d, 2);
  SuperchannelCone c;
  c.kind = ConeClass::general;
  c.d = d;
  c.k = 2;
  c.identities.push_back(equal({"I1", "O1", "F"}, {"I1", "O1", "O2", "F"}));
  c.identities.push_back(equal({"I2", "O2", "F"}, {"O1", "I2", "O2", "F"}));
  c.identities.push_back(
      {{{1, {"F"}}, {-1, {"O1", "F"}}, {-1, {"O2", "F"}}, {1, {"O1", "O2", "F"}}}});
  // Normalization of the past space: _{IOF} S = _{PIOF} S.
  c.identities.push_back(equal({"I1", "I2", "O1", "O2", "F"}, {"P", "I1", "I2", "O1", "O2", "F"}));
  c.trace = default_trace(d, 2);
  return c;
}

SuperchannelCone cone_for(ConeClass cls, int d, int k) {
  switch (cls) {
    case ConeClass::parallel:
      return cone_parallel(d, k);
    case ConeClass::sequential:
      return cone_sequential(d, k);
    case ConeClass::general:
      if (k == 1) {
        auto c = cone_parallel(d, 1);
        c.kind = ConeClass::general;
        return c;
      }
      if (k == 2) return cone_general_k2(d);
      throw Error("general cone is only available for k <= 2");
  }
  throw Error("unsupported cone");
}

LabeledOperator identity_residual(const TraceReplaceIdentity& id, const LabeledOperator& s) {
  LabeledOperator out = LabeledOperator::zero(s.labels());
  for (const auto& t : id.terms) {
    const LabeledOperator term = t.spaces.empty() ? s : trace_and_replace(s, t.spaces);
    out += cplx(t.coeff) * term;
  }
  return out;
}

namespace {

struct IdentityLayout {
  std::vector<int> common;                         // X0 factor indices
  std::vector<int> rest;                           // complement factor indices
  std::vector<std::pair<int, std::vector<int>>> terms;  // coeff, positions within rest
};

IdentityLayout layout_of(const TraceReplaceIdentity& id, const std::vector<std::string>& names) {
  auto index = [&](const std::string& s) {
    const auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) throw Error("identity refers to unknown space '" + s + "'");
    return static_cast<int>(it - names.begin());
  };
  IdentityLayout l;
  for (const auto& s : id.common_spaces()) l.common.push_back(index(s));
  std::sort(l.common.begin(), l.common.end());
  l.rest = detail::complement(static_cast<int>(names.size()), l.common);
  for (const auto& t : id.terms) {
    std::vector<int> pos;
    for (const auto& s : t.spaces) {
      const int f = index(s);
      if (std::binary_search(l.common.begin(), l.common.end(), f)) continue;
      pos.push_back(static_cast<int>(std::find(l.rest.begin(), l.rest.end(), f) - l.rest.begin()));
    }
    l.terms.push_back({t.coeff, pos});
  }
  return l;
}

// sum_t c_t _{Z_t}(|p><q|) on the complement space, as (row, col, value).
void apply_to_unit(const IdentityLayout& l, int d, std::size_t p, std::size_t q,
                   std::map<std::pair<std::size_t, std::size_t>, double>& acc) {
  const int nf = static_cast<int>(l.rest.size());
  std::vector<int> dims(nf, d);
  const auto st = detail::strides_of(dims);
  auto digit = [&](std::size_t x, int f) { return static_cast<int>((x / st[f]) % d); };
  for (const auto& [c, z] : l.terms) {
    bool match = true;
    for (int f : z)
      if (digit(p, f) != digit(q, f)) {
        match = false;
        break;
      }
    if (!match) continue;
    std::size_t p0 = p, q0 = q;
    for (int f : z) {
      p0 -= digit(p, f) * st[f];
      q0 -= digit(q, f) * st[f];
    }
    const auto zoff = detail::offsets(dims, z);
    const double v = c / static_cast<double>(zoff.size());
    for (std::size_t o : zoff) acc[{p0 + o, q0 + o}] += v;
  }
}

double sparse_dot(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b) {
  return a.cwiseProduct(b).sum();
}

}  // namespace

std::vector<ScalarConstraint> expand_constraints(const SuperchannelCone& cone) {
  const auto labels = cone.labels();
  std::vector<std::string> names;
  std::vector<int> dims;
  for (const auto& l : labels) names.push_back(l.name), dims.push_back(l.dim);
  const auto n = static_cast<Eigen::Index>(detail::product_of(dims));

  std::vector<ScalarConstraint> raw;
  {
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    raw.push_back({eye, cone.trace});
  }
  for (const auto& id : cone.identities) {
    const auto l = layout_of(id, names);
    const auto ro = detail::offsets(dims, l.rest);
    const auto co = detail::offsets(dims, l.common);
    const std::size_t m = ro.size();
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p; q < m; ++q) {
        std::map<std::pair<std::size_t, std::size_t>, double> acc;
        apply_to_unit(l, cone.d, p, q, acc);
        if (p != q) apply_to_unit(l, cone.d, q, p, acc);
        std::vector<Eigen::Triplet<double>> trip;
        for (const auto& [pq, v] : acc) {
          if (std::abs(v) < 1e-15) continue;
          for (std::size_t o : co)
            trip.emplace_back(static_cast<int>(ro[pq.first] + o),
                              static_cast<int>(ro[pq.second] + o), v);
        }
        if (trip.empty()) continue;
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(trip.begin(), trip.end());
        raw.push_back({std::move(a), 0.0});
      }
  }

  // Greedy selection by an incremental Cholesky factor of the kept rows' Gram.
  std::vector<ScalarConstraint> kept;
  std::vector<std::vector<double>> lrows;
  std::vector<double> ldiag;
  for (auto& c : raw) {
    const double nrm2 = sparse_dot(c.a, c.a);
    std::vector<double> row(kept.size());
    double res = nrm2;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      double v = sparse_dot(kept[i].a, c.a);
      const auto& li = lrows[i];
      for (std::size_t j = 0; j < i; ++j) v -= row[j] * li[j];
      row[i] = v / ldiag[i];
      res -= row[i] * row[i];
    }
    if (res > 1e-10 * nrm2) {
      kept.push_back(std::move(c));
      lrows.push_back(std::move(row));
      ldiag.push_back(std::sqrt(res));
    }
  }
  return kept;
}

ValidationReport validate(const LabeledOperator& s, const SuperchannelCone& cone, double tol) {
  if (s.labels() != cone.labels())
    throw ValidationError("operator labels do not match the " + cone.name() + " cone (d=" +
                          std::to_string(cone.d) + ", k=" + std::to_string(cone.k) + ")");
  ValidationReport r;
  for (const auto& id : cone.identities) {
    const double res = identity_residual(id, s).matrix().cwiseAbs().maxCoeff();
    r.identity_residuals.push_back(res);
    r.max_affine_residual = std::max(r.max_affine_residual, res);
    if (res > tol) r.violations.push_back(id.describe() + " violated by " + std::to_string(res));
  }
  r.trace_residual = std::abs(s.trace().real() - cone.trace);
  r.max_affine_residual = std::max(r.max_affine_residual, r.trace_residual);
  if (r.trace_residual > tol)
    r.violations.push_back("trace " + std::to_string(s.trace().real()) + " differs from " +
                           std::to_string(cone.trace));
  r.hermiticity = s.hermiticity_residual();
  if (r.hermiticity > tol) r.violations.push_back("not Hermitian");
  r.min_eigenvalue = s.min_eigenvalue();
  if (r.min_eigenvalue < -tol)
    r.violations.push_back("negative eigenvalue " + std::to_string(r.min_eigenvalue));
  r.passed = r.violations.empty();
  return r;
}

LabeledOperator noise_superchannel(const SuperchannelCone& cone) {
  const auto ls = cone.labels();
  const double n = std::pow(double(cone.d), 2 * cone.k + 2);
  return (cone.trace / n) * LabeledOperator::identity(ls);
}

LabeledOperator random_channel_choi(const std::vector<SpaceLabel>& in,
                                    const std::vector<SpaceLabel>& out, std::mt19937_64& rng) {
  std::vector<SpaceLabel> ls = in;
  ls.insert(ls.end(), out.begin(), out.end());
  int n = 1;
  for (const auto& l : ls) n *= l.dim;
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = cplx(g(rng), g(rng));
  const LabeledOperator c(ls, m * m.adjoint());
  std::vector<std::string> outs;
  for (const auto& l : out) outs.push_back(l.name);
  const LabeledOperator t = partial_trace(c, outs);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(t.matrix());
  const LabeledOperator k = embed(LabeledOperator(t.labels(), es.operatorInverseSqrt()), out);
  return k.compose(c).compose(k);
}

namespace {

std::vector<SpaceLabel> one(const std::string& name, int d) { return {{name, d}}; }

std::vector<int> default_order(int k, std::vector<int> order) {
  if (order.empty()) {
    order.resize(k);
    std::iota(order.begin(), order.end(), 1);
  }
  return order;
}

}  // namespace

LabeledOperator random_parallel_member(int d, int k, std::uint64_t seed) {
  check_dk(d, k);
  std::mt19937_64 rng(seed);
  std::vector<SpaceLabel> enc_out, dec_in{{"AUX0", d}};
  for (const auto& s : input_names(k)) enc_out.push_back({s, d});
  enc_out.push_back({"AUX0", d});
  for (const auto& s : output_names(k)) dec_in.push_back({s, d});
  const auto e = random_channel_choi(one("P", d), enc_out, rng);
  const auto dec = random_channel_choi(dec_in, one("F", d), rng);
  return link_product(e, dec);
}

LabeledOperator random_sequential_member(int d, int k, std::uint64_t seed,
                                         std::vector<int> order) {
  check_dk(d, k);
  order = default_order(k, std::move(order));
  if (static_cast<int>(order.size()) != k) throw Error("slot order must have k entries");
  std::mt19937_64 rng(seed);
  auto mem = [](int j) { return "AUX" + std::to_string(j); };
  LabeledOperator s = random_channel_choi(
      one("P", d), {{slot("I", order[0]), d}, {mem(0), d}}, rng);
  for (int j = 1; j < k; ++j)
    s = link_product(s, random_channel_choi({{slot("O", order[j - 1]), d}, {mem(j - 1), d}},
                                            {{slot("I", order[j]), d}, {mem(j), d}}, rng));
  return link_product(
      s, random_channel_choi({{slot("O", order[k - 1]), d}, {mem(k - 1), d}}, one("F", d), rng));
}

LabeledOperator assemble_measure_and_prepare(const LabeledOperator& rho,
                                             const std::vector<LabeledOperator>& povm,
                                             const std::vector<LabeledOperator>& recover) {
  if (povm.empty() || povm.size() != recover.size())
    throw ValidationError("measure-and-prepare needs one recovery channel per POVM element");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-10 || rho.hermiticity_residual() > 1e-10 ||
      rho.min_eigenvalue() < -1e-10)
    throw ValidationError("probe is not a density operator");
  LabeledOperator sum = LabeledOperator::zero(povm[0].labels());
  for (const auto& m : povm) {
    if (m.min_eigenvalue() < -1e-10 || m.hermiticity_residual() > 1e-10)
      throw ValidationError("POVM element is not positive semidefinite");
    sum += m;
  }
  if (sum.distance(LabeledOperator::identity(sum.labels())) > 1e-10)
    throw ValidationError("POVM elements do not sum to the identity");
  LabeledOperator s;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const auto& r = recover[i];
    if (!r.has_label("P") || !r.has_label("F") || r.labels().size() != 2)
      throw ValidationError("recovery channel must act from P to F");
    if (r.min_eigenvalue() < -1e-10 ||
        partial_trace(r, {"F"}).distance(LabeledOperator::identity(one("P", r.dim_of("P")))) >
            1e-10)
      throw ValidationError("recovery operator is not a channel Choi operator");
    const LabeledOperator mt(povm[i].labels(), povm[i].matrix().transpose());
    const auto term = link_product(link_product(rho, mt), r);
    if (i == 0) s = term;
    else s += term;
  }
  return s;
}

LabeledOperator DelayedInput::superchannel() const {
  return link_product(probe.projector(), recovery);
}

namespace {

struct SpectralParts {
  CMatrix sqrt, pinv_sqrt, kernel;  // kernel = 1 - support projector
};

SpectralParts spectral_parts(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const auto& ev = es.eigenvalues();
  const auto& v = es.eigenvectors();
  const double cut = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd sq(ev.size()), inv(ev.size()), ker(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const bool on = ev(i) > cut;
    sq(i) = on ? std::sqrt(ev(i)) : 0.0;
    inv(i) = on ? 1.0 / std::sqrt(ev(i)) : 0.0;
    ker(i) = on ? 0.0 : 1.0;
  }
  SpectralParts p;
  p.sqrt = v * sq.cast<cplx>().asDiagonal() * v.adjoint();
  p.pinv_sqrt = v * inv.cast<cplx>().asDiagonal() * v.adjoint();
  p.kernel = v * ker.cast<cplx>().asDiagonal() * v.adjoint();
  return p;
}

void check_superchannel_labels(const LabeledOperator& s, int k) {
  if (!s.has_label("P")) throw ValidationError("operator has no P factor");
  const int d = s.dim_of("P");
  if (s.labels() != superchannel_labels(d, k))
    throw ValidationError("operator is not over P, I1..Ik, O1..Ok, F for k=" + std::to_string(k));
}

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

DelayedInput delayed_input_form(const LabeledOperator& s, int k, double tol) {
  check_superchannel_labels(s, k);
  const int d = s.dim_of("P");
  const auto in = input_names(k), out = output_names(k);
  const double tr = s.trace().real();
  if (!(tr > 0.0)) throw ValidationError("superchannel has non-positive trace");
  const LabeledOperator rho = (1.0 / tr) * partial_trace(s, with(with({"P"}, out), {"F"}));
  const LabeledOperator lhs = partial_trace(s, with(out, {"F"}));
  const LabeledOperator rhs =
      tensor((tr / d) * rho, LabeledOperator::identity(one("P", d)));
  if (lhs.distance(rhs) > tol * std::max(1.0, lhs.matrix().cwiseAbs().maxCoeff()))
    throw ValidationError("tr_OF S does not factor as 1_P/d_P (x) tr_POF S");

  const auto parts = spectral_parts(rho.matrix());
  const int di = static_cast<int>(rho.dim());
  CVector v = CVector::Zero(std::size_t(di) * di);
  for (int a = 0; a < di; ++a)
    for (int i = 0; i < di; ++i) v(a * di + i) = parts.sqrt(a, i);
  std::vector<SpaceLabel> probe_labels = rho.labels();
  probe_labels.push_back({"AUX0", di});

  std::vector<SpaceLabel> rest{{"P", d}};
  for (const auto& o : out) rest.push_back({o, d});
  rest.push_back({"F", d});
  const LabeledOperator x = embed(LabeledOperator(rho.labels(), parts.pinv_sqrt), rest);
  LabeledOperator r = x.compose(s).compose(x);
  rest.pop_back();  // F gets 1/d below
  r += tensor(embed(LabeledOperator(rho.labels(), parts.kernel), rest),
              (1.0 / d) * LabeledOperator::identity(one("F", d)));

  // Move I1..Ik to a single AUX0 factor after F.
  const auto ls = r.labels();
  std::vector<int> dims, order;
  for (const auto& l : ls) dims.push_back(l.dim);
  std::vector<int> ifac;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i].name[0] == 'I') ifac.push_back(static_cast<int>(i));
    else order.push_back(static_cast<int>(i));
  }
  order.insert(order.end(), ifac.begin(), ifac.end());
  std::vector<SpaceLabel> rl;
  for (std::size_t i = 0; i < order.size() - ifac.size(); ++i) rl.push_back(ls[order[i]]);
  rl.push_back({"AUX0", di});
  DelayedInput outp;
  outp.probe = LabeledVector(probe_labels, v);
  outp.recovery =
      LabeledOperator(rl, detail::permute_factors<cplx>(r.matrix(), dims, order));
  return outp;
}

LabeledOperator twirl(const LabeledOperator& s, TaskSpec task) {
  check_superchannel_labels(s, task.k);
  if (s.dim_of("P") != task.d) throw ValidationError("operator dimension does not match the task");
  if (task.k > kMaxUses) throw Error("twirl supports k <= " + std::to_string(kMaxUses));
  const InvariantAlgebra alg(task);
  return LabeledOperator(s.labels(), alg.twirl(s.matrix()));
}

ParallelForm parallelize_covariant(const LabeledOperator& s, int k, int samples,
                                   std::uint64_t seed, double tol) {
  check_superchannel_labels(s, k);
  const int d = s.dim_of("P");
  const auto in = input_names(k), out = output_names(k);
  const LabeledOperator h = partial_trace(s, {"F"});
  const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());
  for (int i = 0; i < samples; ++i) {
    const CMatrix u = haar_unitary(d, seed + static_cast<std::uint64_t>(i)).matrix();
    LabeledOperator g = LabeledOperator::identity(one("P", d));
    for (const auto& x : in) g = tensor(g, LabeledOperator::identity(one(x, d)));
    for (const auto& o : out) g = tensor(g, LabeledOperator(one(o, d), u));
    const double res = (h.matrix() * g.matrix() - g.matrix() * h.matrix()).cwiseAbs().maxCoeff();
    if (res > tol * scale)
      throw ValidationError("tr_F S does not commute with U on the outputs (residual " +
                            std::to_string(res) + ")");
  }

  const auto parts = spectral_parts(h.matrix());
  std::map<std::string, std::string> to_mem{{"P", "AUX0"}};
  for (int j = 1; j <= k; ++j) to_mem[slot("I", j)] = "AUX" + std::to_string(j);
  auto enc_map = to_mem;
  for (int j = 1; j <= k; ++j) enc_map[slot("O", j)] = slot("I", j);

  // E = (sqrt(H)^T on AUX0, AUX.., I (x) 1_P) |Phi><Phi| (same)^dagger
  const LabeledOperator m =
      embed(relabel(LabeledOperator(h.labels(), parts.sqrt.transpose()), enc_map), one("P", d));
  LabeledVector phi = choi_vector(CMatrix::Identity(d, d), "AUX0", "P");
  for (int j = 1; j <= k; ++j)
    phi = tensor(phi, choi_vector(CMatrix::Identity(d, d), "AUX" + std::to_string(j), slot("I", j)));
  const LabeledOperator e = m.compose(phi.projector()).compose(m.adjoint());

  // D = sqrt(H)^+ S sqrt(H)^+ on the memory copies, completed on the kernel.
  const LabeledOperator xp =
      embed(relabel(LabeledOperator(h.labels(), parts.pinv_sqrt), to_mem), one("F", d));
  LabeledOperator dec = xp.compose(relabel(s, to_mem)).compose(xp);
  dec += tensor(relabel(LabeledOperator(h.labels(), parts.kernel), to_mem),
                (1.0 / d) * LabeledOperator::identity(one("F", d)));

  ParallelForm f;
  f.encoder = e;
  f.decoder = dec;
  f.superchannel = link_product(e, dec);
  return f;
}

LabeledOperator Superinstrument::total() const {
  if (branches.empty()) throw Error("superinstrument has no branches");
  LabeledOperator s = branches.front();
  for (std::size_t i = 1; i < branches.size(); ++i) s += branches[i];
  return s;
}

ValidationReport validate(const Superinstrument& si, double tol) {
  ValidationReport r = validate(si.total(), si.cone, tol);
  for (std::size_t i = 0; i < si.branches.size(); ++i) {
    const double ev = si.branches[i].min_eigenvalue();
    if (ev < -tol) {
      r.violations.push_back("branch " + std::to_string(i) + " has eigenvalue " +
                             std::to_string(ev));
      r.passed = false;
    }
  }
  return r;
}

double probabilistic_lower_bound(double p_s) {
  if (!(p_s >= 0.0 && p_s <= 1.0)) throw Error("success probability must lie in [0, 1]");
  return p_s;
}

}  // namespace unitrans
