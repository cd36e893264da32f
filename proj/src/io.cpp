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

#include "unitrans/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace unitrans {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw Error("cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string operator_to_json(const LabeledOperator& a) {
  std::ostringstream os;
  os << "{\"labels\":[";
  for (std::size_t i = 0; i < a.labels().size(); ++i) {
    if (i) os << ',';
    os << "{\"name\":\"" << a.labels()[i].name << "\",\"dim\":" << a.labels()[i].dim
       << '}';
  }
  const auto& m = a.matrix();
  for (int part = 0; part < 2; ++part) {
    os << (part == 0 ? "],\"re\":[" : "],\"im\":[");
    bool first = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (!first) os << ',';
        first = false;
        os << format_double(part == 0 ? m(r, c).real() : m(r, c).imag());
      }
  }
  os << "]}";
  return os.str();
}

nlohmann::json operator_to_json_value(const LabeledOperator& a) {
  return nlohmann::json::parse(operator_to_json(a));
}

nlohmann::json parse_json(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

LabeledOperator operator_from_json(const nlohmann::json& j, const std::string& source) {
  auto fail = [&](const std::string& where, const std::string& msg) -> ParseError {
    return ParseError(source + ": " + where + ": " + msg);
  };
  if (!j.is_object()) throw fail("/", "expected an object");
  for (const char* key : {"labels", "re", "im"})
    if (!j.contains(key)) throw fail("/", std::string("missing key '") + key + "'");
  const auto& jl = j["labels"];
  if (!jl.is_array()) throw fail("/labels", "expected an array");
  std::vector<SpaceLabel> ls;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const auto& e = jl[i];
    const std::string at = "/labels/" + std::to_string(i);
    if (!e.is_object() || !e.contains("name") || !e.contains("dim") ||
        !e["name"].is_string() || !e["dim"].is_number_integer())
      throw fail(at, "expected {\"name\": string, \"dim\": integer}");
    ls.push_back({e["name"].get<std::string>(), e["dim"].get<int>()});
  }
  std::size_t n = 1;
  for (const auto& l : ls) {
    if (l.dim < 1) throw fail("/labels", "dimension < 1 for '" + l.name + "'");
    n *= static_cast<std::size_t>(l.dim);
  }
  CMatrix m(n, n);
  for (int part = 0; part < 2; ++part) {
    const char* key = part == 0 ? "re" : "im";
    const auto& arr = j[key];
    if (!arr.is_array()) throw fail(std::string("/") + key, "expected an array");
    if (arr.size() != n * n)
      throw fail(std::string("/") + key, "expected " + std::to_string(n * n) +
                                             " entries, found " + std::to_string(arr.size()));
    for (std::size_t idx = 0; idx < n * n; ++idx) {
      if (!arr[idx].is_number())
        throw fail(std::string("/") + key + "/" + std::to_string(idx), "not a number");
      const double v = arr[idx].get<double>();
      auto& z = m(idx / n, idx % n);
      z = part == 0 ? cplx(v, z.imag()) : cplx(z.real(), v);
    }
  }
  try {
    return LabeledOperator(std::move(ls), std::move(m));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw fail("/labels", e.what());
  }
}

LabeledOperator operator_from_json(const std::string& text, const std::string& source) {
  return operator_from_json(parse_json(text, source), source);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path + ": write failed");
}

void write_operator_file(const std::string& path, const LabeledOperator& a) {
  write_text_file(path, operator_to_json(a) + "\n");
}

LabeledOperator read_operator_file(const std::string& path) {
  return operator_from_json(read_text_file(path), path);
}

}  // namespace unitrans
