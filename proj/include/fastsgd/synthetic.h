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

#ifndef FASTSGD_SYNTHETIC_H_
#define FASTSGD_SYNTHETIC_H_

#include <cstdint>
#include <string>

#include "fastsgd/dataset.h"
#include "fastsgd/sparse_gradient.h"

namespace fastsgd {

enum class ValueDistribution { kLogNormal, kUniform };
enum class KeyLayout { kRandomSubset, kEvenlySpaced, kGeometricGaps };

ValueDistribution ParseValueDistribution(const std::string& name);

struct SyntheticGradientSpec {
  size_t entries = 10000;            // D
  uint64_t dimension = 1000000;      // D_m
  ValueDistribution values = ValueDistribution::kLogNormal;
  double lognormal_sigma = 1.0;
  KeyLayout keys = KeyLayout::kRandomSubset;
  double mean_gap = 100.0;           // kGeometricGaps only
  uint64_t seed = 1;
};

/// Deterministic for a given spec. Values carry random signs. With
/// kGeometricGaps the entry count stops early if keys would pass the
/// dimension.
SparseGradient MakeSyntheticGradient(const SyntheticGradientSpec& spec);

struct SyntheticDatasetSpec {
  size_t instances = 10000;
  uint64_t dimension = 10000;
  size_t nonzeros_per_instance = 20;
  uint64_t seed = 1;
};

/// Linearly separable binary classification data: features are uniform in
/// (0, 1] on a random key subset, labels are sign(w . x) for a hidden
/// Gaussian weight vector w.
Dataset MakeSeparableDataset(const SyntheticDatasetSpec& spec);

}  // namespace fastsgd

#endif  // FASTSGD_SYNTHETIC_H_
