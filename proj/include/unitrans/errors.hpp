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

#include <stdexcept>
#include <string>

namespace unitrans {

// Malformed input: bad labels, shapes, files, arguments.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well-formed but fails a declared membership/precondition check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Solver or factorization failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace unitrans
