// Copyright 2026 The ulearn Authors
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

#ifndef ULEARN_ERRORS_HPP_
#define ULEARN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ulearn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown point id or a classifier/distribution over a different domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A search or enumeration ran past its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on a terminal or otherwise invalid state.
class StateError : public Error {
 public:
  using Error::Error;
};

// Data that no hypothesis of the class can explain.
class RealizabilityError : public Error {
 public:
  using Error::Error;
};

// A construction whose preconditions do not hold.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Exact arithmetic cannot represent the requested quantity.
class InexactError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A TreeAdversary asked for a move past the leaves of its tree.
class AdversaryExhausted : public Error {
 public:
  AdversaryExhausted() : Error("adversary tree exhausted") {}
};

}  // namespace ulearn

#endif  // ULEARN_ERRORS_HPP_
