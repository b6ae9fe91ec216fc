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

#include "fastsgd/codec.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "fastsgd/bitstream.h"
#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

// Relative slack used when correcting the float logarithm.
constexpr double kLogSlack = 1e-12;

constexpr unsigned kMaxLevel = 127;

}  // namespace

void CodecConfig::Validate() const {
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw ConfigError("codec base must be a finite number > 1, got " +
                      std::to_string(base));
  }
  if (threshold < 1 || threshold > kMaxLevel) {
    throw ConfigError("codec threshold tau must be in [1, 127], got " +
                      std::to_string(threshold));
  }
  if (flag_size < 1 || flag_size > 5) {
    throw ConfigError("codec flag size l must be in [1, 5], got " +
                      std::to_string(flag_size));
  }
}

double ReciprocalMap(double value, double sum) {
  double magnitude = std::fabs(value);
  if (magnitude == 0.0 || !(sum > 0.0)) {
    throw ContractViolation("ReciprocalMap: need v != 0 and sum > 0");
  }
  if (magnitude > sum) {
    throw ContractViolation("ReciprocalMap: |v| exceeds sum");
  }
  return sum / magnitude;
}

unsigned LogQuantize(double reciprocal, double base) {
  if (!(reciprocal >= 1.0) || !(base > 1.0)) {
    throw ContractViolation("LogQuantize: need r >= 1 and b > 1");
  }
  if (reciprocal == 1.0) return 0;
  double estimate = std::ceil(std::log(reciprocal) / std::log(base));
  long level = estimate < 0 ? 0 : static_cast<long>(estimate);
  const double target = reciprocal * (1.0 - kLogSlack);
  // Float log can land one off at exact powers of the base.
  while (level > 0 && std::pow(base, static_cast<double>(level - 1)) >= target) {
    --level;
  }
  while (std::pow(base, static_cast<double>(level)) < target) ++level;
  return static_cast<unsigned>(level);
}

ValueEncoding EncodeValues(const SparseGradient& gradient,
                           const CodecConfig& config) {
  if (gradient.empty()) throw EmptyInput("EncodeValues: empty gradient");
  ValueEncoding out;
  out.sum = gradient.AbsSum();
  // Early-stop cut sum / b^tau. Loosened slightly so it never rejects an
  // entry the integer level test would keep; the level test decides.
  const double early_stop =
      out.sum / std::pow(config.base, static_cast<double>(config.threshold)) *
      (1.0 - 1e-9);
  out.retained.reserve(gradient.size());
  for (const GradientEntry& e : gradient.entries()) {
    double magnitude = std::fabs(e.value);
    if (magnitude < early_stop) continue;
    unsigned level = LogQuantize(ReciprocalMap(e.value, out.sum), config.base);
    if (level > config.threshold) continue;
    out.retained.push_back(
        {e.key, e.value < 0.0, static_cast<uint8_t>(level)});
  }
  return out;
}

double DecodeValue(unsigned level, bool negative, double sum, double base) {
  double magnitude = sum / std::pow(base, static_cast<double>(level));
  return negative ? -magnitude : magnitude;
}

uint8_t PackValueByte(bool negative, unsigned level) {
  if (level > kMaxLevel) {
    throw ContractViolation("PackValueByte: level " + std::to_string(level) +
                            " exceeds 7 bits");
  }
  return static_cast<uint8_t>((negative ? 0x80u : 0u) | level);
}

void UnpackValueByte(uint8_t byte, bool* negative, unsigned* level) {
  *negative = (byte & 0x80u) != 0;
  *level = byte & 0x7Fu;
}

unsigned BitLength(uint64_t x) {
  return static_cast<unsigned>(std::bit_width(x));
}

DeltaKeys DeltaEncode(std::span<const uint64_t> keys) {
  DeltaKeys out;
  out.deltas.reserve(keys.size());
  uint64_t previous = 0;
  for (size_t j = 0; j < keys.size(); ++j) {
    if (j > 0 && keys[j] <= previous) {
      throw ContractViolation("DeltaEncode: keys not strictly increasing at " +
                              std::to_string(j));
    }
    uint64_t delta = keys[j] - previous;
    out.deltas.push_back(delta);
    if (delta > out.max_delta) out.max_delta = delta;
    previous = keys[j];
  }
  return out;
}

std::vector<unsigned> LengthLevels(unsigned max_bits, unsigned flag_size) {
  if (max_bits < 1 || max_bits > 64 || flag_size < 1 || flag_size > 5) {
    throw ContractViolation("LengthLevels: need 1 <= M <= 64 and 1 <= l <= 5");
  }
  const unsigned n = 1u << flag_size;
  std::vector<unsigned> levels(n);
  for (unsigned i = 1; i <= n; ++i) {
    levels[i - 1] = (i * max_bits + n - 1) / n;
  }
  return levels;
}

KeyEncoding EncodeKeys(std::span<const uint64_t> keys, unsigned flag_size) {
  if (keys.empty()) throw EmptyInput("EncodeKeys: no keys");
  DeltaKeys delta = DeltaEncode(keys);
  KeyEncoding out;
  out.max_bits = std::max(BitLength(delta.max_delta), 1u);
  const std::vector<unsigned> levels = LengthLevels(out.max_bits, flag_size);
  BitWriter writer;
  for (uint64_t d : delta.deltas) {
    unsigned need = BitLength(d);
    unsigned flag = 0;
    while (levels[flag] < need) ++flag;
    writer.WriteBits(flag, flag_size);
    writer.WriteBits(d, levels[flag]);
  }
  out.bit_count = writer.bit_count();
  out.bytes = std::move(writer).TakeBytes();
  return out;
}

std::vector<uint64_t> DecodeKeys(std::span<const uint8_t> bytes, size_t count,
                                 unsigned max_bits, unsigned flag_size) {
  std::vector<uint64_t> keys;
  if (count == 0) {
    if (!bytes.empty()) {
      throw CorruptPayload("DecodeKeys: key bytes present for zero entries");
    }
    return keys;
  }
  if (max_bits < 1 || max_bits > 64 || flag_size < 1 || flag_size > 5) {
    throw CorruptPayload("DecodeKeys: invalid header M=" +
                         std::to_string(max_bits) +
                         " l=" + std::to_string(flag_size));
  }
  const std::vector<unsigned> levels = LengthLevels(max_bits, flag_size);
  keys.reserve(count);
  BitReader reader(bytes);
  uint64_t previous = 0;
  for (size_t j = 0; j < count; ++j) {
    unsigned flag = static_cast<unsigned>(reader.ReadBits(flag_size));
    uint64_t delta = reader.ReadBits(levels[flag]);
    if (j > 0 && delta == 0) {
      throw CorruptPayload("DecodeKeys: zero delta at record " +
                           std::to_string(j));
    }
    if (delta > std::numeric_limits<uint64_t>::max() - previous) {
      throw CorruptPayload("DecodeKeys: key overflow at record " +
                           std::to_string(j));
    }
    previous += delta;
    keys.push_back(previous);
  }
  size_t tail = reader.bits_remaining();
  if (tail > 7 || (tail > 0 && reader.ReadBits(static_cast<unsigned>(tail)) != 0)) {
    throw CorruptPayload("DecodeKeys: " + std::to_string(tail) +
                         " unexpected trailing bits after " +
                         std::to_string(count) + " records");
  }
  return keys;
}

CompressedGradient Compress(const SparseGradient& gradient,
                            const CodecConfig& config) {
  config.Validate();
  ValueEncoding values = EncodeValues(gradient, config);
  CompressedGradient out;
  out.sum = values.sum;
  out.flag_size = config.flag_size;
  if (values.retained.size() > std::numeric_limits<uint32_t>::max()) {
    throw ContractViolation("Compress: more than 2^32 - 1 retained entries");
  }
  out.count = static_cast<uint32_t>(values.retained.size());
  if (values.retained.empty()) return out;

  std::vector<uint64_t> keys;
  keys.reserve(values.retained.size());
  out.value_bytes.reserve(values.retained.size());
  for (const QuantizedEntry& q : values.retained) {
    out.value_bytes.push_back(PackValueByte(q.negative, q.level));
    keys.push_back(q.key);
  }
  KeyEncoding key_encoding = EncodeKeys(keys, config.flag_size);
  out.max_bits = key_encoding.max_bits;
  out.key_bytes = std::move(key_encoding.bytes);
  return out;
}

SparseGradient Decompress(const CompressedGradient& compressed,
                          const CodecConfig& config, uint64_t dimension) {
  if (compressed.value_bytes.size() != compressed.count) {
    throw CorruptPayload("Decompress: " +
                         std::to_string(compressed.value_bytes.size()) +
                         " value bytes for " +
                         std::to_string(compressed.count) + " entries");
  }
  if (compressed.count == 0) {
    if (!compressed.key_bytes.empty()) {
      throw CorruptPayload("Decompress: key bytes present for zero entries");
    }
    return SparseGradient(dimension);
  }
  if (!(compressed.sum > 0.0) || !std::isfinite(compressed.sum)) {
    throw CorruptPayload("Decompress: sum must be positive and finite");
  }
  std::vector<uint64_t> keys =
      DecodeKeys(compressed.key_bytes, compressed.count, compressed.max_bits,
                 compressed.flag_size);
  std::vector<GradientEntry> entries(keys.size());
  for (size_t j = 0; j < keys.size(); ++j) {
    if (keys[j] >= dimension) {
      throw CorruptPayload("Decompress: key " + std::to_string(keys[j]) +
                           " >= dimension " + std::to_string(dimension));
    }
    bool negative = false;
    unsigned level = 0;
    UnpackValueByte(compressed.value_bytes[j], &negative, &level);
    entries[j] = {keys[j],
                  DecodeValue(level, negative, compressed.sum, config.base)};
  }
  return SparseGradient(std::move(entries), dimension);
}

}  // namespace fastsgd
