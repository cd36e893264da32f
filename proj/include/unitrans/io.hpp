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

#pragma once

#include <json.hpp>
#include <string>

#include "unitrans/tensor.hpp"

namespace unitrans {

/** Thrown for malformed operator/solution files; `what()` carries the location. */
class ParseError : public Error {
 public:
  using Error::Error;
};

// {"labels":[{"name":..,"dim":..}],"re":[..],"im":[..]}, row-major, %.17g.
std::string operator_to_json(const LabeledOperator& a);
LabeledOperator operator_from_json(const std::string& text,
                                   const std::string& source = "<string>");
LabeledOperator operator_from_json(const nlohmann::json& j,
                                   const std::string& source = "<json>");
nlohmann::json operator_to_json_value(const LabeledOperator& a);

void write_operator_file(const std::string& path, const LabeledOperator& a);
LabeledOperator read_operator_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
nlohmann::json parse_json(const std::string& text, const std::string& source);

// Shortest text that reproduces the double exactly is not required; %.17g is.
std::string format_double(double x);

}  // namespace unitrans
