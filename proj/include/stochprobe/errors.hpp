// Copyright 2026 The stochprobe Authors
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

#ifndef STOCHPROBE_ERRORS_HPP
#define STOCHPROBE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stochprobe {

/// Raised when an exhaustive enumeration would exceed its configured cap.
class EnumerationTooLarge : public std::runtime_error {
 public:
  EnumerationTooLarge(const std::string& what, double size, double cap)
      : std::runtime_error(what + ": " + std::to_string(size) +
                           " outcomes exceeds cap " + std::to_string(cap)),
        size_(size),
        cap_(cap) {}
  double size() const { return size_; }
  double cap() const { return cap_; }

 private:
  double size_;
  double cap_;
};

/// Malformed input. `field` names the offending location, e.g. "items[3].cost".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was broken; always a bug or a corrupted input metric.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace stochprobe

#endif  // STOCHPROBE_ERRORS_HPP
