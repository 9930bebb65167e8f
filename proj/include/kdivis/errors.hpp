// Copyright 2026 The kdivis Authors
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

namespace kdivis {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be Hermitian failed the symmetry check.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// A density matrix failed the trace / positivity checks.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Inversion refused: condition number above the configured threshold.
class SingularMap : public Error {
 public:
  explicit SingularMap(double condition)
      : Error("superoperator is singular (condition number " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// Step-halving check failed or the integration produced non-finite values.
class IntegrationUnstable : public Error {
 public:
  using Error::Error;
};

/// Every complement step of a process hit a singular propagator.
class AllStepsSingular : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kdivis
