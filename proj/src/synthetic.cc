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

#include "fastsgd/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

// Floyd's sampling of `count` distinct values in [0, range), sorted.
std::vector<uint64_t> SampleDistinct(size_t count, uint64_t range,
                                     std::mt19937_64* rng) {
  std::unordered_set<uint64_t> picked;
  picked.reserve(count * 2);
  for (uint64_t j = range - count; j < range; ++j) {
    uint64_t t = std::uniform_int_distribution<uint64_t>(0, j)(*rng);
    if (!picked.insert(t).second) picked.insert(j);
  }
  std::vector<uint64_t> keys(picked.begin(), picked.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

ValueDistribution ParseValueDistribution(const std::string& name) {
  if (name == "lognormal") return ValueDistribution::kLogNormal;
  if (name == "uniform") return ValueDistribution::kUniform;
  throw ConfigError("unknown value distribution '" + name +
                    "' (expected lognormal or uniform)");
}

SparseGradient MakeSyntheticGradient(const SyntheticGradientSpec& spec) {
  if (spec.entries > spec.dimension) {
    throw ConfigError("synthetic gradient: more entries than dimension");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<uint64_t> keys;
  switch (spec.keys) {
    case KeyLayout::kRandomSubset:
      keys = SampleDistinct(spec.entries, spec.dimension, &rng);
      break;
    case KeyLayout::kEvenlySpaced: {
      uint64_t step = spec.entries == 0 ? 1 : spec.dimension / spec.entries;
      for (size_t j = 0; j < spec.entries; ++j) keys.push_back(j * step);
      break;
    }
    case KeyLayout::kGeometricGaps: {
      // Gap - 1 is geometric so the mean gap is mean_gap.
      std::geometric_distribution<uint64_t> gap(1.0 / std::max(spec.mean_gap, 1.0));
      uint64_t key = gap(rng);
      for (size_t j = 0; j < spec.entries && key < spec.dimension; ++j) {
        keys.push_back(key);
        key += 1 + gap(rng);
      }
      break;
    }
  }
  std::lognormal_distribution<double> lognormal(0.0, spec.lognormal_sigma);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::bernoulli_distribution negative(0.5);
  std::vector<GradientEntry> entries;
  entries.reserve(keys.size());
  for (uint64_t key : keys) {
    double magnitude = spec.values == ValueDistribution::kLogNormal
                           ? lognormal(rng)
                           : 1.0 - uniform(rng);  // (0, 1]
    entries.push_back({key, negative(rng) ? -magnitude : magnitude});
  }
  return SparseGradient(std::move(entries), spec.dimension);
}

Dataset MakeSeparableDataset(const SyntheticDatasetSpec& spec) {
  if (spec.nonzeros_per_instance == 0 ||
      spec.nonzeros_per_instance > spec.dimension) {
    throw ConfigError("synthetic dataset: bad nonzeros per instance");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> hidden(spec.dimension);
  for (double& w : hidden) w = normal(rng);

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Dataset ds;
  ds.dimension = spec.dimension;
  ds.name = "synthetic-separable";
  ds.instances.reserve(spec.instances);
  for (size_t i = 0; i < spec.instances; ++i) {
    Instance inst;
    double margin = 0.0;
    for (uint64_t key :
         SampleDistinct(spec.nonzeros_per_instance, spec.dimension, &rng)) {
      double x = 1.0 - uniform(rng);
      inst.features.push_back({key, x});
      margin += hidden[key] * x;
    }
    inst.label = margin >= 0.0 ? 1.0 : -1.0;
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

}  // namespace fastsgd
