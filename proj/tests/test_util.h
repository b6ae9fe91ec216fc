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
//
// Independent reference implementations used as test oracles. None of these
// share code with the library: they work on '0'/'1' strings and integer
// arithmetic so that a bug in the production bit packing cannot hide itself.

#ifndef FASTSGD_TESTS_TEST_UTIL_H_
#define FASTSGD_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fastsgd/dataset.h"
#include "fastsgd/models.h"
#include "fastsgd/sparse_gradient.h"

namespace fastsgd::testing {

/// Appends `value` as `width` characters '0'/'1', most significant first.
void AppendBitString(uint64_t value, unsigned width, std::string* bits);

/// Packs a '0'/'1' string MSB-first into bytes, zero-padding the last byte.
std::vector<uint8_t> PackBitString(const std::string& bits);

/// Renders bytes as a '0'/'1' string (8 characters per byte).
std::string BytesToBitString(const std::vector<uint8_t>& bytes);

/// Reference key encoder: returns the unpadded bit string and sets `*m`.
std::string ReferenceEncodeKeys(const std::vector<uint64_t>& keys,
                                unsigned flag_size, unsigned* m);

/// Smallest L >= 0 with base^L >= r, computed by repeated multiplication
/// with the same relative slack the codec documents (1e-12).
unsigned ReferenceLevel(double r, double base);

/// Exact integer version for integral bases and reciprocal ratios given as
/// rationals num/den: smallest L with base^L * den >= num.
unsigned IntegerLevel(uint64_t num, uint64_t den, uint64_t base);

/// Random strictly increasing key list of `n` keys below `dimension`.
std::vector<uint64_t> RandomKeys(size_t n, uint64_t dimension,
                                 std::mt19937_64* rng);

/// Random gradient with mixed signs; log-normal or uniform magnitudes.
SparseGradient RandomGradient(size_t n, uint64_t dimension, bool lognormal,
                              std::mt19937_64* rng);

/// Mean bits per key of a byte-granularity delta coder: each delta uses the
/// minimal whole number of bytes (at least one) plus a 2-bit byte-count flag.
double ByteGranularityBitsPerKey(const std::vector<uint64_t>& keys);

std::string ReadFile(const std::string& path);

/// Random instances with `nnz` distinct keys below `dimension`, Gaussian
/// feature values, and labels in {-1, +1} (or Gaussian for regression).
std::vector<Instance> RandomInstances(size_t n, uint64_t dimension, size_t nnz,
                                      bool regression, std::mt19937_64* rng);

/// Independent objective for one instance: 1/2 (y - m)^2, log(1 + e^{-ym})
/// or max(0, 1 - ym).
double ReferenceInstanceLoss(ModelType type, double margin, double label);

struct FiniteDifferenceReport {
  double max_relative_error = 0.0;
  size_t coordinates_checked = 0;
};

/// Compares BatchGradient against central differences of the reference
/// objective (data loss plus lambda/2 theta^2 on touched coordinates) on up
/// to `max_coords` randomly chosen touched coordinates.
FiniteDifferenceReport CheckAgainstFiniteDifferences(
    const ModelKind& kind, const std::vector<double>& theta,
    const std::vector<Instance>& batch, size_t max_coords, double step,
    std::mt19937_64* rng);

}  // namespace fastsgd::testing

#endif  // FASTSGD_TESTS_TEST_UTIL_H_
