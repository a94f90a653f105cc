// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace elaa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user or target sits on (or behind) the array plane, or a steering slice vanished.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Channel matrix without full column rank; ZF is undefined.
class SingularChannelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& what, int constraint_index)
      : Error(what), constraint_index_(constraint_index) {}
  int constraint_index() const noexcept { return constraint_index_; }

 private:
  int constraint_index_;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

// The all-on activation already violates a QoS floor, so no activation is feasible.
class InfeasibleInstanceError : public Error {
 public:
  using Error::Error;
};

}  // namespace elaa
