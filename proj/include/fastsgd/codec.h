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

// FastSGD sparse-gradient codec.
//
// Values go through three stages: every value is mapped to the reciprocal
// sum(|v|) / |v| >= 1, that ratio is quantized to the integer level
// ceil(log_b ratio), and levels above the threshold tau are dropped. Each
// surviving value costs one sign-magnitude byte. The decoder rebuilds
// sign * sum / b^level, which never overshoots the original magnitude and
// stays within a factor b of it.
//
// Keys of the surviving entries are delta-encoded and every delta is written
// in one of 2^l bit widths, ceil(i * M / 2^l) for i = 1..2^l where M is the
// bit length of the largest delta, preceded by an l-bit flag naming the
// width. Keys are lossless.

#ifndef FASTSGD_CODEC_H_
#define FASTSGD_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fastsgd/sparse_gradient.h"

namespace fastsgd {

struct CodecConfig {
  double base = 1.1;     // b > 1
  unsigned threshold = 127;  // tau in [1, 127]; 127 is the largest 7-bit level
  unsigned flag_size = 2;    // l in [1, 5]

  /// Throws ConfigError when a field is out of range.
  void Validate() const;
};

/// One retained value: key, sign and quantized level.
struct QuantizedEntry {
  uint64_t key;
  bool negative;
  uint8_t level;

  bool operator==(const QuantizedEntry&) const = default;
};

struct ValueEncoding {
  std::vector<QuantizedEntry> retained;
  double sum = 0.0;  // sum of |v| over all input entries, filtered or not
};

struct KeyEncoding {
  std::vector<uint8_t> bytes;
  size_t bit_count = 0;
  unsigned max_bits = 0;  // M
};

/// Encoder output. `value_bytes` holds one sign-magnitude byte per retained
/// entry (bit 7 = negative, bits 0-6 = level); `key_bytes` holds the
/// zero-padded flag/delta bit stream for the same entries.
struct CompressedGradient {
  double sum = 0.0;
  uint32_t count = 0;
  unsigned max_bits = 0;
  unsigned flag_size = 2;
  std::vector<uint8_t> value_bytes;
  std::vector<uint8_t> key_bytes;

  bool operator==(const CompressedGradient&) const = default;
};

// Value pipeline.

/// sum / |v|. Throws ContractViolation if v == 0, sum <= 0 or |v| > sum.
double ReciprocalMap(double value, double sum);

/// ceil(log_base(reciprocal)), exact at integer powers of `base`.
unsigned LogQuantize(double reciprocal, double base);

/// Throws EmptyInput on an empty gradient.
ValueEncoding EncodeValues(const SparseGradient& gradient,
                           const CodecConfig& config);

/// sign * sum / base^level.
double DecodeValue(unsigned level, bool negative, double sum, double base);

uint8_t PackValueByte(bool negative, unsigned level);
void UnpackValueByte(uint8_t byte, bool* negative, unsigned* level);

// Key pipeline.

/// Position of the highest set bit plus one; 0 for 0.
unsigned BitLength(uint64_t x);

struct DeltaKeys {
  std::vector<uint64_t> deltas;
  uint64_t max_delta = 0;
};

/// First delta is the first key itself. Throws ContractViolation unless keys
/// are strictly increasing.
DeltaKeys DeltaEncode(std::span<const uint64_t> keys);

/// The 2^l payload widths ceil(i * M / 2^l), i = 1..2^l.
std::vector<unsigned> LengthLevels(unsigned max_bits, unsigned flag_size);

KeyEncoding EncodeKeys(std::span<const uint64_t> keys, unsigned flag_size);

/// Reads exactly `count` flag/delta records. Throws TruncatedStream when the
/// stream ends early and CorruptPayload on non-increasing keys, overflow, or
/// anything other than up to 7 zero padding bits after the last record.
std::vector<uint64_t> DecodeKeys(std::span<const uint8_t> bytes, size_t count,
                                 unsigned max_bits, unsigned flag_size);

// Whole-gradient codec.

CompressedGradient Compress(const SparseGradient& gradient,
                            const CodecConfig& config);

/// Throws CorruptPayload if a key is >= dimension or sections disagree with
/// `count`.
SparseGradient Decompress(const CompressedGradient& compressed,
                          const CodecConfig& config, uint64_t dimension);

}  // namespace fastsgd

#endif  // FASTSGD_CODEC_H_
