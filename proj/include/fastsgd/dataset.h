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

#ifndef FASTSGD_DATASET_H_
#define FASTSGD_DATASET_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace fastsgd {

struct Feature {
  uint64_t key;
  double value;

  bool operator==(const Feature&) const = default;
};

/// One labelled example. Feature keys are 0-based and strictly increasing.
struct Instance {
  std::vector<Feature> features;
  double label = 0.0;

  bool operator==(const Instance&) const = default;
};

struct Dataset {
  std::vector<Instance> instances;
  uint64_t dimension = 0;
  std::string name;

  size_t size() const { return instances.size(); }
  bool operator==(const Dataset&) const = default;
};

enum class LabelMode { kClassification, kRegression };

/// Reads LIBSVM text ("<label> <key>:<value> ..." with 1-based keys).
/// Classification maps labels 1/+1 to +1 and 0/-1 to -1. Throws DataError
/// carrying the 1-based line number on malformed input or an empty file.
Dataset ParseLibsvm(std::istream& in, LabelMode mode,
                    const std::string& name = "");

/// Loads a LIBSVM file, plain or gzip-compressed. Throws DataError when the
/// file cannot be opened; the message names the path.
Dataset LoadLibsvm(const std::string& path, LabelMode mode);

/// Writes LIBSVM text with shortest round-trip number formatting.
void WriteLibsvm(const Dataset& dataset, std::ostream& out);

struct Shard {
  size_t owner = 0;
  std::vector<size_t> indices;
};

/// Seeded shuffle followed by round-robin assignment; shard sizes differ by
/// at most one. Throws ConfigError when workers == 0 or workers > N.
std::vector<Shard> Partition(const Dataset& dataset, size_t workers,
                             uint64_t seed);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

/// Seeded shuffle, then the first round(train_fraction * N) instances train.
TrainTestSplit SplitTrainTest(const Dataset& dataset, double train_fraction,
                              uint64_t seed);

/// Fisher-Yates driven directly by mt19937_64 output, so results do not
/// depend on the standard library's distribution implementations.
void SeededShuffle(std::vector<size_t>* items, std::mt19937_64* rng);

}  // namespace fastsgd

#endif  // FASTSGD_DATASET_H_
