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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace unitrans::cli {

/** Exit codes shared by every subcommand. */
enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kNumerical = 3 };

/** Parsed and checked command line. Lists are expanded, e.g. k = "1..3". */
struct RunConfig {
  std::string command;
  std::vector<std::string> tasks{"transpose"};
  std::vector<int> d{2};
  std::vector<int> k{1};
  std::vector<std::string> cones{"parallel"};
  double tol = 1e-9;
  double precision = 1e-4;
  std::uint64_t seed = 1;
  long samples = 1000;
  int jobs = 1;
  std::string in;
  std::string out;
  std::string format = "json";
  bool timestamp = true;
  bool full = false;  // solve without symmetry reduction

  /** Throws Error on out-of-range values or a list where one value is needed. */
  void validate() const;
};

/** "1..5", "1,3", "2" -> integers; throws Error on malformed text. */
std::vector<int> parse_int_list(const std::string& text);

/** Runs one invocation. Output documents go to `out` unless --out names a file. */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace unitrans::cli
