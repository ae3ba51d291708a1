// Copyright 2026 The netcode Authors
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

namespace netcode {

/// Base for every error raised by the library.  The CLI maps the three
/// families below onto exit codes 1 (coding), 2 (input) and 3 (resource).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network files, inconsistent flows, bad arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A sink whose min-cut from the source set is below h.
class CapacityError : public InputError {
 public:
  CapacityError(std::string sink, const std::string& what)
      : InputError(what), sink_(std::move(sink)) {}
  const std::string& sink() const { return sink_; }

 private:
  std::string sink_;
};

/// A configured cap (degree, cycle count, path count, exponent search)
/// was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The encoder or a verifier could not produce a valid code.
class CodingError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace netcode
