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

#ifndef FASTSGD_SPARSE_GRADIENT_H_
#define FASTSGD_SPARSE_GRADIENT_H_

#include <cstdint>
#include <vector>

namespace fastsgd {

struct GradientEntry {
  uint64_t key;
  double value;

  bool operator==(const GradientEntry&) const = default;
};

/// Sparse gradient over a parameter space of `dimension` coordinates.
///
/// Invariants, enforced by the constructor: keys strictly increasing, every
/// key below `dimension`, no stored value equal to zero. Zero values passed
/// in are dropped rather than rejected.
class SparseGradient {
 public:
  explicit SparseGradient(uint64_t dimension = 0) : dimension_(dimension) {}
  SparseGradient(std::vector<GradientEntry> entries, uint64_t dimension);

  /// Builds from parallel key/value arrays; same validation as above.
  static SparseGradient FromArrays(const std::vector<uint64_t>& keys,
                                   const std::vector<double>& values,
                                   uint64_t dimension);

  const std::vector<GradientEntry>& entries() const { return entries_; }
  uint64_t dimension() const { return dimension_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<uint64_t> Keys() const;
  double AbsSum() const;

  bool operator==(const SparseGradient&) const = default;

 private:
  std::vector<GradientEntry> entries_;
  uint64_t dimension_;
};

}  // namespace fastsgd

#endif  // FASTSGD_SPARSE_GRADIENT_H_
