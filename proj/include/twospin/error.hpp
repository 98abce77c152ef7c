// Copyright 2026 The twospin Authors
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

#ifndef TWOSPIN_ERROR_HPP_
#define TWOSPIN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace twospin {

// Precondition violations on library calls throw std::invalid_argument or
// std::domain_error. The types below carry the categories the CLI maps onto
// exit codes.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input data (curves, records).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rates that make a generator grow some element or lose complete positivity.
class NonPhysicalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace twospin

#endif  // TWOSPIN_ERROR_HPP_
