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

#include "fastsgd/sparse_gradient.h"

#include <cmath>
#include <string>

#include "fastsgd/errors.h"

namespace fastsgd {

SparseGradient::SparseGradient(std::vector<GradientEntry> entries,
                               uint64_t dimension)
    : dimension_(dimension) {
  entries_.reserve(entries.size());
  bool have_prev = false;
  uint64_t prev = 0;
  for (const GradientEntry& e : entries) {
    if (e.key >= dimension) {
      throw ContractViolation("SparseGradient: key " + std::to_string(e.key) +
                              " >= dimension " + std::to_string(dimension));
    }
    if (have_prev && e.key <= prev) {
      throw ContractViolation("SparseGradient: keys not strictly increasing at " +
                              std::to_string(e.key));
    }
    if (!std::isfinite(e.value)) {
      throw ContractViolation("SparseGradient: non-finite value at key " +
                              std::to_string(e.key));
    }
    have_prev = true;
    prev = e.key;
    if (e.value != 0.0) entries_.push_back(e);
  }
}

SparseGradient SparseGradient::FromArrays(const std::vector<uint64_t>& keys,
                                          const std::vector<double>& values,
                                          uint64_t dimension) {
  if (keys.size() != values.size()) {
    throw ContractViolation("SparseGradient: key/value length mismatch");
  }
  std::vector<GradientEntry> entries(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) entries[i] = {keys[i], values[i]};
  return SparseGradient(std::move(entries), dimension);
}

std::vector<uint64_t> SparseGradient::Keys() const {
  std::vector<uint64_t> keys;
  keys.reserve(entries_.size());
  for (const GradientEntry& e : entries_) keys.push_back(e.key);
  return keys;
}

double SparseGradient::AbsSum() const {
  double sum = 0.0;
  for (const GradientEntry& e : entries_) sum += std::fabs(e.value);
  return sum;
}

}  // namespace fastsgd
