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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "unitrans/errors.hpp"
#include "unitrans/formulas.hpp"
#include "unitrans/groups.hpp"
#include "unitrans/io.hpp"
#include "unitrans/perfop.hpp"
#include "unitrans/sdp.hpp"
#include "unitrans/superchannels.hpp"

namespace unitrans::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kTasks{"conjugate", "transpose", "invert"};
const std::vector<std::string> kCones{"parallel", "sequential", "general"};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  if (out.empty()) throw Error("empty list '" + text + "'");
  return out;
}

std::vector<std::string> expand_names(const std::string& text,
                                      const std::vector<std::string>& known,
                                      const std::string& what) {
  if (text == "all") return known;
  std::vector<std::string> out = split(text);
  for (const auto& s : out)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw Error("unknown " + what + " '" + s + "'");
  return out;
}

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from(const json& a, const std::string& what) {
  if (!a.is_array()) throw ParseError(what + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ParseError(what + "[" + std::to_string(i) + "]: not a number");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

const json& field(const json& doc, const std::string& key, const std::string& source) {
  if (!doc.is_object() || !doc.contains(key))
    throw ParseError(source + ": missing field '" + key + "'");
  return doc.at(key);
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

// CSV projection of an array of flat records over the given columns.
std::string to_csv(const json& records, const std::vector<std::string>& columns) {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : records) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << (r.contains(columns[i]) ? csv_cell(r[columns[i]]) : "");
    os << "\n";
  }
  return os.str();
}

class Runner {
 public:
  Runner(const RunConfig& cfg, const std::set<std::string>& given, std::ostream& out,
         std::ostream& err)
      : cfg_(cfg), given_(given), out_(out), err_(err) {}

  int dispatch() {
    const std::string& c = cfg_.command;
    if (c == "omega") return omega();
    if (c == "solve") return solve_cmd();
    if (c == "certify") return certify_cmd();
    if (c == "table") return table();
    if (c == "verify") return verify();
    if (c == "bounds") return bounds();
    if (c == "validate") return validate_cmd();
    throw Error("unknown command '" + c + "'");
  }

 private:
  TaskSpec spec() const {
    return TaskSpec{task_from_string(cfg_.tasks.front()), cfg_.d.front(), cfg_.k.front()};
  }

  void emit_text(const std::string& text) {
    if (cfg_.out.empty())
      out_ << text;
    else
      write_text_file(cfg_.out, text);
  }

  void emit(json doc) {
    if (cfg_.format == "csv") throw Error(cfg_.command + " has no csv output");
    if (cfg_.timestamp) doc["timestamp"] = timestamp_now();
    emit_text(doc.dump(2) + "\n");
  }

  void emit_records(const json& records, const std::vector<std::string>& columns) {
    if (cfg_.format == "csv") {
      emit_text(to_csv(records, columns));
      return;
    }
    json doc{{"records", records}};
    if (cfg_.timestamp) doc["timestamp"] = timestamp_now();
    emit_text(doc.dump(2) + "\n");
  }

  int omega() {
    const TaskSpec t = spec();
    const PerformanceOperator om = omega_build(t);
    json meta{{"task", to_string(t.f)},
              {"d", t.d},
              {"k", t.k},
              {"dimension", om.omega.dim()},
              {"trace", om.omega.trace().real()},
              {"min_eigenvalue", om.omega.min_eigenvalue()},
              {"hermiticity", om.omega.hermiticity_residual()}};
    if (cfg_.timestamp) meta["timestamp"] = timestamp_now();
    if (cfg_.out.empty()) {
      out_ << json{{"meta", meta}, {"omega", operator_to_json_value(om.omega)}}.dump(2) << "\n";
      return kOk;
    }
    write_operator_file(cfg_.out, om.omega);
    std::string side = cfg_.out;
    if (side.size() > 5 && side.compare(side.size() - 5, 5, ".json") == 0) side.resize(side.size() - 5);
    side += ".meta.json";
    write_text_file(side, meta.dump(2) + "\n");
    out_ << meta.dump(2) << "\n";
    return kOk;
  }

  int solve_cmd() {
    const TaskSpec t = spec();
    const ConeClass cls = cone_class_from_string(cfg_.cones.front());
    const SuperchannelCone cone = cone_for(cls, t.d, t.k);
    const SdpProblem p = assemble(omega_build(t), cone, !cfg_.full);
    SolverOptions so;
    so.tol = cfg_.tol;
    const SdpSolution s = solve(p, so);
    if (s.w.size() == 0) throw NumericalError("solver returned no iterate (" + to_string(s.status) + ")");
    const LabeledOperator sop(cone.labels(), s.x.cast<cplx>());
    json doc{{"task", to_string(t.f)},
             {"d", t.d},
             {"k", t.k},
             {"cone", to_string(cls)},
             {"reduced", p.reduced},
             {"variable_dimension", p.variable_dimension()},
             {"status", to_string(s.status)},
             {"iterations", s.iterations},
             {"fidelity", s.value()},
             {"visibility", visibility_from_fidelity(std::clamp(s.value(), 1.0 / (t.d * t.d), 1.0), t.d)},
             {"dual_objective", s.dual_objective},
             {"gap", s.gap},
             {"primal_infeasibility", s.primal_infeasibility},
             {"dual_infeasibility", s.dual_infeasibility},
             {"w", vec_json(s.w)},
             {"g", vec_json(s.g)},
             {"S", operator_to_json_value(sop)}};
    emit(doc);
    if (!s.solved()) {
      err_ << "solve: solver stopped with status " << to_string(s.status) << "\n";
      return kNumerical;
    }
    return kOk;
  }

  int certify_cmd() {
    if (cfg_.in.empty()) throw Error("certify needs --in");
    const json doc = parse_json(read_text_file(cfg_.in), cfg_.in);
    try {
      const TaskSpec t{task_from_string(field(doc, "task", cfg_.in).get<std::string>()),
                       field(doc, "d", cfg_.in).get<int>(), field(doc, "k", cfg_.in).get<int>()};
      const ConeClass cls = cone_class_from_string(field(doc, "cone", cfg_.in).get<std::string>());
      const SdpProblem p =
          assemble(omega_build(t), cone_for(cls, t.d, t.k), field(doc, "reduced", cfg_.in).get<bool>());
      SdpSolution sol;
      sol.w = vec_from(field(doc, "w", cfg_.in), cfg_.in + ": w");
      sol.g = vec_from(field(doc, "g", cfg_.in), cfg_.in + ": g");
      if (sol.w.size() != p.space->size() || sol.g.size() != p.space->size())
        throw ParseError(cfg_.in + ": w and g must have " + std::to_string(p.space->size()) + " entries");
      sol.status = field(doc, "status", cfg_.in).get<std::string>() == "optimal"
                       ? SolverStatus::optimal
                       : SolverStatus::max_iterations;
      sol.gap = field(doc, "gap", cfg_.in).get<double>();
      const CertifiedInterval ci = certify(p, sol, cfg_.precision);
      json res{{"task", to_string(t.f)},
               {"d", t.d},
               {"k", t.k},
               {"cone", to_string(cls)},
               {"lower", to_fraction_string(ci.lower)},
               {"upper", to_fraction_string(ci.upper)},
               {"lower_value", ci.lower.get_d()},
               {"upper_value", ci.upper.get_d()},
               {"width", ci.width()},
               {"precision", cfg_.precision},
               {"verified", verify_certificate(p, ci)},
               {"mixing", to_fraction_string(ci.mixing)},
               {"inflation", to_fraction_string(ci.inflation)},
               {"primal_denominator", ci.primal_denominator},
               {"dual_denominator", ci.dual_denominator},
               {"notes", ci.notes}};
      emit(res);
    } catch (const json::exception& e) {
      throw ParseError(cfg_.in + ": " + e.what());
    }
    return kOk;
  }

  static bool applies(const std::string& record_cone, const std::string& cone) {
    if (record_cone == "all") return true;
    if (record_cone == "sequential") return cone == "sequential" || cone == "general";
    return record_cone == cone;
  }

  json cell(const std::string& task, int d, int k, const std::string& cone) const {
    json c{{"task", task}, {"d", d}, {"k", k}, {"cone", cone}};
    try {
      OptimizeOptions opts;
      opts.solver.tol = cfg_.tol;
      opts.precision = cfg_.precision;
      const TaskSpec t{task_from_string(task), d, k};
      const TaskReport rep = optimize_task(t, cone_class_from_string(cone), opts);
      c["status"] = to_string(rep.solution.status);
      c["fidelity"] = rep.fidelity;
      c["visibility"] = rep.visibility;
      const CertifiedInterval& ci = *rep.interval;
      c["lower"] = to_fraction_string(ci.lower);
      c["upper"] = to_fraction_string(ci.upper);
      c["lower_value"] = ci.lower.get_d();
      c["upper_value"] = ci.upper.get_d();
      c["width"] = ci.width();
      c["verified"] = verify_certificate(rep.problem, ci);
      json refs = json::array();
      bool consistent = true;
      for (const auto& r : formulas::bounds_for(task, d, k)) {
        if (!applies(r.cone, cone)) continue;
        bool ok = true;
        if (r.kind == formulas::BoundKind::exact)
          ok = std::abs(rep.fidelity - r.value) <= 1e-5 && ci.lower.get_d() <= r.value + 1e-12 &&
               r.value <= ci.upper.get_d() + 1e-12;
        else if (r.kind == formulas::BoundKind::upper)
          ok = rep.fidelity <= r.value + 1e-8;
        else
          ok = rep.fidelity >= r.value - 1e-8;
        consistent = consistent && ok;
        refs.push_back({{"kind", formulas::to_string(r.kind)},
                        {"value", r.value},
                        {"source", r.source},
                        {"consistent", ok}});
      }
      c["references"] = refs;
      c["consistent"] = consistent;
    } catch (const std::exception& e) {
      c["error"] = e.what();
    }
    return c;
  }

  int table() {
    struct Key {
      std::string task;
      int d, k;
      std::string cone;
    };
    std::vector<Key> keys;
    for (const auto& t : cfg_.tasks)
      for (int d : cfg_.d)
        for (int k : cfg_.k)
          for (const auto& c : cfg_.cones) keys.push_back({t, d, k, c});
    std::vector<json> cells(keys.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < keys.size(); i = next++)
        cells[i] = cell(keys[i].task, keys[i].d, keys[i].k, keys[i].cone);
    };
    const int jobs = std::max(1, std::min<int>(cfg_.jobs, static_cast<int>(keys.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    // Flag certified separations between cones of the same instance.
    std::map<std::tuple<std::string, int, int>, std::map<std::string, const json*>> by;
    for (const auto& c : cells)
      if (!c.contains("error"))
        by[{c["task"].get<std::string>(), c["d"].get<int>(), c["k"].get<int>()}]
          [c["cone"].get<std::string>()] = &c;
    json records = json::array();
    for (auto& c : cells) {
      const auto it = by.find({c["task"].get<std::string>(), c["d"].get<int>(), c["k"].get<int>()});
      if (!c.contains("error") && it != by.end()) {
        const std::string cone = c["cone"].get<std::string>();
        const std::string below = cone == "general" ? "sequential" : cone == "sequential" ? "parallel" : "";
        const auto b = it->second.find(below);
        if (b != it->second.end()) {
          const mpq_class gap = parse_fraction(c["lower"].get<std::string>()) -
                                parse_fraction((*b->second)["upper"].get<std::string>());
          c["certified_gap_over_" + below] = gap.get_d();
          c["exceeds_" + below] = sgn(gap) > 0;
        }
      }
      records.push_back(c);
    }
    emit_records(records, {"task", "d", "k", "cone", "status", "fidelity", "visibility", "lower",
                           "upper", "width", "verified", "consistent",
                           "exceeds_parallel", "exceeds_sequential", "error"});
    return kOk;
  }

  // An operator file or a solve output with an "S" member.
  std::pair<LabeledOperator, json> read_superchannel() const {
    if (cfg_.in.empty()) throw Error(cfg_.command + " needs --in");
    const json doc = parse_json(read_text_file(cfg_.in), cfg_.in);
    if (doc.is_object() && doc.contains("S")) return {operator_from_json(doc["S"], cfg_.in + ": S"), doc};
    return {operator_from_json(doc, cfg_.in), json::object()};
  }

  static std::pair<int, int> shape_of(const LabeledOperator& s) {
    if (!s.has_label("P")) throw ValidationError("superchannel has no P factor");
    int k = 0;
    while (s.has_label("I" + std::to_string(k + 1))) ++k;
    if (k == 0) throw ValidationError("superchannel has no input slots");
    return {s.dim_of("P"), k};
  }

  std::string pick(const json& doc, const std::string& key, const std::string& flag) const {
    if (!given_.count(flag) && doc.contains(key)) return doc[key].get<std::string>();
    return key == "task" ? cfg_.tasks.front() : cfg_.cones.front();
  }

  json report_json(const ValidationReport& r, const SuperchannelCone& cone, double tol) const {
    return json{{"cone", cone.name()},
                {"d", cone.d},
                {"k", cone.k},
                {"tol", tol},
                {"passed", r.passed},
                {"max_affine_residual", r.max_affine_residual},
                {"trace_residual", r.trace_residual},
                {"identity_residuals", r.identity_residuals},
                {"min_eigenvalue", r.min_eigenvalue},
                {"hermiticity", r.hermiticity},
                {"violations", r.violations}};
  }

  double validation_tol() const { return given_.count("tol") ? cfg_.tol : 1e-8; }

  int validate_cmd() {
    const auto [s, doc] = read_superchannel();
    const auto [d, k] = shape_of(s);
    const SuperchannelCone cone = cone_for(cone_class_from_string(pick(doc, "cone", "cone")), d, k);
    const double tol = validation_tol();
    const ValidationReport r = validate(s, cone, tol);
    emit(report_json(r, cone, tol));
    return r.passed ? kOk : kInvalid;
  }

  int verify() {
    const auto [s, doc] = read_superchannel();
    const auto [d, k] = shape_of(s);
    const SuperchannelCone cone = cone_for(cone_class_from_string(pick(doc, "cone", "cone")), d, k);
    const double tol = validation_tol();
    const ValidationReport r = validate(s, cone, tol);
    if (!r.passed) {
      emit(json{{"validation", report_json(r, cone, tol)}});
      return kInvalid;
    }
    const TaskSpec t{task_from_string(pick(doc, "task", "task")), d, k};
    const double exact = average_fidelity(s, omega_build(t));
    const LabeledOperator tw = twirl(s, t);
    std::mt19937_64 rng(cfg_.seed);
    std::vector<double> f, ft;
    for (long i = 0; i < cfg_.samples; ++i) {
      const UnitaryMatrix u = haar_unitary(d, rng());
      f.push_back(fidelity_at_unitary(s, u, t));
      ft.push_back(fidelity_at_unitary(tw, u, t));
    }
    auto stats = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= double(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var = v.size() > 1 ? var / double(v.size() - 1) : 0.0;
      return std::pair{mean, var};
    };
    const auto [mean, var] = stats(f);
    const auto [tmean, tvar] = stats(ft);
    const double se = std::sqrt(var / double(f.size()));
    const double dev = std::abs(mean - exact);
    json res{{"task", to_string(t.f)},
             {"d", d},
             {"k", k},
             {"cone", cone.name()},
             {"samples", cfg_.samples},
             {"seed", cfg_.seed},
             {"average_fidelity", exact},
             {"mean", mean},
             {"stderr", se},
             {"min", *std::min_element(f.begin(), f.end())},
             {"max", *std::max_element(f.begin(), f.end())},
             {"variance", var},
             {"consistent", dev <= 5.0 * se + 1e-10},
             {"twirled_average_fidelity", average_fidelity(tw, omega_build(t))},
             {"twirled_mean", tmean},
             {"twirled_variance", tvar},
             {"validation", report_json(r, cone, tol)}};
    emit(res);
    return kOk;
  }

  int bounds() {
    json records = json::array();
    for (const auto& task : cfg_.tasks)
      for (int d : cfg_.d)
        for (int k : cfg_.k)
          for (const auto& r : formulas::bounds_for(task, d, k))
            records.push_back({{"task", r.task},
                               {"d", r.d},
                               {"k", r.k},
                               {"cone", r.cone},
                               {"kind", formulas::to_string(r.kind)},
                               {"value", r.value},
                               {"source", r.source}});
    emit_records(records, {"task", "d", "k", "cone", "kind", "value", "source"});
    return kOk;
  }

  const RunConfig& cfg_;
  const std::set<std::string>& given_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error("malformed integer '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<int> out;
  for (const auto& part : split(text)) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(number(part));
      continue;
    }
    const int a = number(part.substr(0, dots)), b = number(part.substr(dots + 2));
    if (b < a) throw Error("empty range '" + part + "'");
    for (int i = a; i <= b; ++i) out.push_back(i);
  }
  return out;
}

void RunConfig::validate() const {
  for (int x : d)
    if (x < 2) throw Error("--d must be >= 2");
  for (int x : k)
    if (x < 1) throw Error("--k must be >= 1");
  if (!(tol > 0.0)) throw Error("--tol must be positive");
  if (!(precision > 0.0)) throw Error("--precision must be positive");
  if (samples < 2) throw Error("--samples must be >= 2");
  if (jobs < 1) throw Error("--jobs must be >= 1");
  if (format != "json" && format != "csv") throw Error("--format must be json or csv");
  const bool grid = command == "table" || command == "bounds";
  if (!grid && (tasks.size() != 1 || d.size() != 1 || k.size() != 1 || cones.size() != 1))
    throw Error(command + " takes a single task, d, k and cone");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimize and certify transformations of k uses of an unknown unitary", "unitrans"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string task = "transpose", cone = "parallel", d = "2", k = "1";

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"omega", "Build the performance operator and a metadata sidecar"},
      {"solve", "Solve the fidelity SDP over one cone"},
      {"certify", "Exact rational bounds from a solve output (--in)"},
      {"table", "Solve and certify a grid of tasks, dimensions, uses and cones"},
      {"verify", "Monte Carlo fidelity of a superchannel (--in) over Haar samples"},
      {"bounds", "Closed-form fidelities and bounds"},
      {"validate", "Residual report of a superchannel (--in) against a cone"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    s->add_option("--task", task, "conjugate, transpose, invert; lists or 'all' for table/bounds");
    s->add_option("--d", d, "Local dimension; lists like 2,3 for table/bounds");
    s->add_option("--k", k, "Number of uses; lists and ranges like 1..5 for table/bounds");
    s->add_option("--cone", cone, "parallel, sequential, general; lists or 'all' for table");
    s->add_option("--tol", cfg.tol, "Solver tolerance (validation tolerance when given)");
    s->add_option("--precision", cfg.precision, "Target certified interval width");
    s->add_option("--seed", cfg.seed, "Seed for all randomness");
    s->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    s->add_option("--jobs", cfg.jobs, "Concurrent table cells");
    s->add_option("--in", cfg.in, "Input file");
    s->add_option("--out", cfg.out, "Output file (default stdout)");
    s->add_option("--format", cfg.format, "json or csv");
    s->add_flag("--no-timestamp", "Omit the timestamp field");
    s->add_flag("--full", cfg.full, "Solve without symmetry reduction");
    subs.push_back(s);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::set<std::string> given;
  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    for (const char* f : {"task", "d", "k", "cone", "tol", "precision", "seed", "samples", "jobs"})
      if (sub->count(std::string("--") + f) > 0) given.insert(f);
    cfg.timestamp = sub->count("--no-timestamp") == 0;
    cfg.tasks = expand_names(task, kTasks, "task");
    cfg.cones = expand_names(cone, kCones, "cone");
    cfg.d = parse_int_list(d);
    cfg.k = parse_int_list(k);
    cfg.validate();
    Runner runner(cfg, given, out, err);
    return runner.dispatch();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace unitrans::cli
