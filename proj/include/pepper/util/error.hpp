// Copyright 2026 The pepper Authors.
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

namespace pepper {

// Base for all library errors. Callers that only care about "something in
// pepper failed" catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a schema or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical routine could not produce a usable answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Operation requested on an object that is not ready for it (untrained model).
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace pepper
