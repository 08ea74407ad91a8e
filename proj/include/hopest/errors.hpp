// Copyright 2026 The hopest Authors.
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

namespace hopest {

/// Non-finite value produced or consumed by the dynamics integrator.
class DynamicsFault : public std::runtime_error {
 public:
  DynamicsFault(const std::string& field, double value);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Numerical failure inside the vertical state filter.
class FilterFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An inferred measurement that is not allowed for the active filter kind.
class ImuptRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration: unknown key, invalid value, out-of-range parameter.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unusable input data: malformed log, empty dataset, missing events.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hopest
