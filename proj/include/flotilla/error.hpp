// Copyright 2026 The Flotilla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOTILLA_ERROR_HPP_
#define FLOTILLA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace flotilla {

// Invalid lattice: duplicate, disconnected, or too narrow to steer.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A structural matrix whose 2x2 Gram matrix cannot be inverted.
class RankDeficientError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameter tables or physical constants outside their valid range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fitting failed: bad input data or the solver did not converge.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario or input-file validation. Carries every problem found, not just
// the first one.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : std::runtime_error(Join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string Join(const std::vector<std::string>& issues) {
    std::string out = "validation failed";
    for (const auto& issue : issues) {
      out += "; ";
      out += issue;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace flotilla

#endif  // FLOTILLA_ERROR_HPP_
