// Copyright 2026 The FastSGD Authors. All Rights Reserved.
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
// =============================================================================

#ifndef FASTSGD_ERRORS_H_
#define FASTSGD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fastsgd {

// Violated precondition of a public operation (bad argument, out-of-range
// value, unsorted keys, ...).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// Input stream ended before the requested data could be read.
class TruncatedStream : public std::runtime_error {
 public:
  explicit TruncatedStream(const std::string& what)
      : std::runtime_error(what) {}
};

// Input decoded, but the result violates a format invariant.
class CorruptPayload : public std::runtime_error {
 public:
  explicit CorruptPayload(const std::string& what)
      : std::runtime_error(what) {}
};

class EmptyInput : public std::invalid_argument {
 public:
  explicit EmptyInput(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed dataset text, with the offending 1-based line number.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace fastsgd

#endif  // FASTSGD_ERRORS_H_
