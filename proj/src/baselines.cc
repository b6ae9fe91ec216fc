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

#include "fastsgd/baselines.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

constexpr size_t kKeyBytes = 4;

void CheckFrame(const FrameHeader& h, CodecId expected) {
  if (h.codec != expected) {
    throw CorruptPayload(std::string("expected ") + CodecIdName(expected) +
                         " frame, found " + CodecIdName(h.codec));
  }
}

void RequireBody(std::span<const uint8_t> payload, size_t body_bytes,
                 const char* section) {
  if (payload.size() < kHeaderBytes + body_bytes) {
    throw TruncatedStream(std::string(section) + " ended early at byte offset " +
                          std::to_string(payload.size()) + ", need " +
                          std::to_string(kHeaderBytes + body_bytes));
  }
  if (payload.size() > kHeaderBytes + body_bytes) {
    throw CorruptPayload("trailing bytes after " + std::string(section));
  }
}

uint32_t CheckedKey32(uint64_t key) {
  if (key > std::numeric_limits<uint32_t>::max()) {
    throw ContractViolation("key " + std::to_string(key) +
                            " does not fit the 32-bit key field");
  }
  return static_cast<uint32_t>(key);
}

uint32_t CheckedCount(size_t n) {
  if (n > std::numeric_limits<uint32_t>::max()) {
    throw ContractViolation("more than 2^32 - 1 entries in one frame");
  }
  return static_cast<uint32_t>(n);
}

int LogQuantBias(unsigned bits) { return 1 << (bits - 2); }

class FastSgdCodec : public GradientCodec {
 public:
  explicit FastSgdCodec(const CodecConfig& config) : config_(config) {}
  CodecId id() const override { return CodecId::kFastSgd; }
  std::vector<uint8_t> Encode(const SparseGradient& gradient) const override {
    if (gradient.empty()) {
      CompressedGradient empty;
      empty.flag_size = config_.flag_size;
      return SerializeCompressed(empty);
    }
    return SerializeCompressed(Compress(gradient, config_));
  }
  SparseGradient Decode(std::span<const uint8_t> payload,
                        uint64_t dimension) const override {
    return Decompress(ParseCompressed(payload), config_, dimension);
  }

 private:
  CodecConfig config_;
};

class IdentityCodec : public GradientCodec {
 public:
  CodecId id() const override { return CodecId::kIdentity; }
  std::vector<uint8_t> Encode(const SparseGradient& gradient) const override {
    return IdentityCompress(gradient);
  }
  SparseGradient Decode(std::span<const uint8_t> payload,
                        uint64_t dimension) const override {
    return IdentityDecompress(payload, dimension);
  }
};

class TopKCodec : public GradientCodec {
 public:
  TopKCodec(const CodecKind& kind, unsigned flag_size)
      : kind_(kind), flag_size_(flag_size) {}
  CodecId id() const override { return CodecId::kTopK; }
  std::vector<uint8_t> Encode(const SparseGradient& gradient) const override {
    uint64_t k = kind_.topk_count;
    if (k == 0) {
      k = static_cast<uint64_t>(std::ceil(
          kind_.topk_fraction * static_cast<double>(gradient.dimension())));
      k = std::max<uint64_t>(k, 1);
    }
    return TopKCompress(gradient, k, flag_size_);
  }
  SparseGradient Decode(std::span<const uint8_t> payload,
                        uint64_t dimension) const override {
    return TopKDecompress(payload, dimension);
  }

 private:
  CodecKind kind_;
  unsigned flag_size_;
};

class LogQuantCodec : public GradientCodec {
 public:
  explicit LogQuantCodec(unsigned bits) : bits_(bits) {}
  CodecId id() const override { return CodecId::kLogQuant; }
  std::vector<uint8_t> Encode(const SparseGradient& gradient) const override {
    return LogQuantCompress(gradient, bits_);
  }
  SparseGradient Decode(std::span<const uint8_t> payload,
                        uint64_t dimension) const override {
    return LogQuantDecompress(payload, dimension);
  }

 private:
  unsigned bits_;
};

}  // namespace

void CodecKind::Validate() const {
  if (id == CodecId::kTopK && topk_count == 0 &&
      !(topk_fraction > 0.0 && topk_fraction <= 1.0)) {
    throw ConfigError("top-k fraction must be in (0, 1], got " +
                      std::to_string(topk_fraction));
  }
  if (id == CodecId::kLogQuant && (logquant_bits < 2 || logquant_bits > 8)) {
    throw ConfigError("logquant bits must be in [2, 8], got " +
                      std::to_string(logquant_bits));
  }
}

std::string CodecKind::ToString() const {
  switch (id) {
    case CodecId::kTopK:
      return topk_count > 0 ? "topk(k=" + std::to_string(topk_count) + ")"
                            : "topk(fraction=" + std::to_string(topk_fraction) + ")";
    case CodecId::kLogQuant:
      return "logquant(bits=" + std::to_string(logquant_bits) + ")";
    default:
      return CodecIdName(id);
  }
}

CodecId ParseCodecId(const std::string& name) {
  if (name == "fastsgd") return CodecId::kFastSgd;
  if (name == "identity" || name == "adam" || name == "none") {
    return CodecId::kIdentity;
  }
  if (name == "topk") return CodecId::kTopK;
  if (name == "logquant") return CodecId::kLogQuant;
  throw ConfigError("unknown codec '" + name +
                    "' (expected fastsgd, identity, topk or logquant)");
}

std::unique_ptr<GradientCodec> MakeCodec(const CodecKind& kind,
                                         const CodecConfig& config) {
  kind.Validate();
  config.Validate();
  switch (kind.id) {
    case CodecId::kFastSgd:
      return std::make_unique<FastSgdCodec>(config);
    case CodecId::kIdentity:
      return std::make_unique<IdentityCodec>();
    case CodecId::kTopK:
      return std::make_unique<TopKCodec>(kind, config.flag_size);
    case CodecId::kLogQuant:
      return std::make_unique<LogQuantCodec>(kind.logquant_bits);
  }
  throw ConfigError("unknown codec id");
}

std::vector<uint8_t> IdentityCompress(const SparseGradient& gradient) {
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + gradient.size() * (kKeyBytes + 8));
  FrameHeader h;
  h.codec = CodecId::kIdentity;
  h.count = CheckedCount(gradient.size());
  h.sum = gradient.AbsSum();
  AppendHeader(h, &out);
  for (const GradientEntry& e : gradient.entries()) {
    AppendLe32(CheckedKey32(e.key), &out);
    AppendLe64(std::bit_cast<uint64_t>(e.value), &out);
  }
  return out;
}

SparseGradient IdentityDecompress(std::span<const uint8_t> payload,
                                  uint64_t dimension) {
  FrameHeader h = ParseHeader(payload);
  CheckFrame(h, CodecId::kIdentity);
  RequireBody(payload, size_t{h.count} * (kKeyBytes + 8), "identity body");
  std::vector<GradientEntry> entries(h.count);
  size_t offset = kHeaderBytes;
  for (uint32_t i = 0; i < h.count; ++i) {
    entries[i].key = ReadLe32(payload, offset);
    entries[i].value = std::bit_cast<double>(ReadLe64(payload, offset + 4));
    offset += kKeyBytes + 8;
  }
  try {
    return SparseGradient(std::move(entries), dimension);
  } catch (const ContractViolation& e) {
    throw CorruptPayload(std::string("identity body: ") + e.what());
  }
}

SparseGradient TopKSelect(const SparseGradient& gradient, uint64_t k) {
  if (k == 0) throw ContractViolation("TopKSelect: k must be >= 1");
  const auto& all = gradient.entries();
  if (k >= all.size()) return gradient;
  std::vector<GradientEntry> picked(all.begin(), all.end());
  auto larger = [](const GradientEntry& a, const GradientEntry& b) {
    double ma = std::fabs(a.value), mb = std::fabs(b.value);
    if (ma != mb) return ma > mb;
    return a.key < b.key;
  };
  std::nth_element(picked.begin(), picked.begin() + static_cast<ptrdiff_t>(k),
                   picked.end(), larger);
  picked.resize(k);
  std::sort(picked.begin(), picked.end(),
            [](const GradientEntry& a, const GradientEntry& b) {
              return a.key < b.key;
            });
  return SparseGradient(std::move(picked), gradient.dimension());
}

std::vector<uint8_t> TopKCompress(const SparseGradient& gradient, uint64_t k,
                                  unsigned flag_size) {
  SparseGradient kept = TopKSelect(gradient, k);
  std::vector<uint8_t> out;
  FrameHeader h;
  h.codec = CodecId::kTopK;
  h.flag_size = static_cast<uint8_t>(flag_size);
  h.count = CheckedCount(kept.size());
  h.sum = kept.AbsSum();
  KeyEncoding keys;
  if (!kept.empty()) {
    std::vector<uint64_t> key_list = kept.Keys();
    keys = EncodeKeys(key_list, flag_size);
  }
  h.max_bits = static_cast<uint8_t>(keys.max_bits);
  AppendHeader(h, &out);
  for (const GradientEntry& e : kept.entries()) {
    AppendLe64(std::bit_cast<uint64_t>(e.value), &out);
  }
  out.insert(out.end(), keys.bytes.begin(), keys.bytes.end());
  return out;
}

SparseGradient TopKDecompress(std::span<const uint8_t> payload,
                              uint64_t dimension) {
  FrameHeader h = ParseHeader(payload);
  CheckFrame(h, CodecId::kTopK);
  const size_t values_end = kHeaderBytes + size_t{h.count} * 8;
  if (payload.size() < values_end) {
    throw TruncatedStream("top-k value section ended early at byte offset " +
                          std::to_string(payload.size()));
  }
  std::vector<uint64_t> keys =
      DecodeKeys(payload.subspan(values_end), h.count, h.max_bits, h.flag_size);
  std::vector<GradientEntry> entries(h.count);
  for (uint32_t i = 0; i < h.count; ++i) {
    if (keys[i] >= dimension) {
      throw CorruptPayload("top-k key " + std::to_string(keys[i]) +
                           " >= dimension");
    }
    entries[i] = {keys[i], std::bit_cast<double>(ReadLe64(
                               payload, kHeaderBytes + size_t{i} * 8))};
  }
  return SparseGradient(std::move(entries), dimension);
}

uint8_t LogQuantEncodeValue(double value, unsigned bits) {
  if (value == 0.0 || !std::isfinite(value)) {
    throw ContractViolation("LogQuantEncodeValue: value must be finite and nonzero");
  }
  if (bits < 2 || bits > 8) {
    throw ContractViolation("LogQuantEncodeValue: bits must be in [2, 8]");
  }
  const int bias = LogQuantBias(bits);
  double exponent = std::nearbyint(std::log2(std::fabs(value)));
  exponent = std::clamp(exponent, static_cast<double>(-bias),
                        static_cast<double>(bias - 1));
  unsigned biased = static_cast<unsigned>(static_cast<int>(exponent) + bias);
  return static_cast<uint8_t>((value < 0.0 ? 0x80u : 0u) | biased);
}

double LogQuantDecodeValue(uint8_t code, unsigned bits) {
  const int bias = LogQuantBias(bits);
  int exponent = static_cast<int>(code & 0x7Fu) - bias;
  double magnitude = std::ldexp(1.0, exponent);
  return (code & 0x80u) ? -magnitude : magnitude;
}

std::vector<uint8_t> LogQuantCompress(const SparseGradient& gradient,
                                      unsigned bits) {
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + gradient.size() * (1 + kKeyBytes));
  FrameHeader h;
  h.codec = CodecId::kLogQuant;
  h.flag_size = static_cast<uint8_t>(bits);  // value width for this codec
  h.count = CheckedCount(gradient.size());
  h.sum = gradient.AbsSum();
  AppendHeader(h, &out);
  for (const GradientEntry& e : gradient.entries()) {
    out.push_back(LogQuantEncodeValue(e.value, bits));
  }
  for (const GradientEntry& e : gradient.entries()) {
    AppendLe32(CheckedKey32(e.key), &out);
  }
  return out;
}

SparseGradient LogQuantDecompress(std::span<const uint8_t> payload,
                                  uint64_t dimension) {
  FrameHeader h = ParseHeader(payload);
  CheckFrame(h, CodecId::kLogQuant);
  if (h.flag_size < 2 || h.flag_size > 8) {
    throw CorruptPayload("logquant frame with invalid value width " +
                         std::to_string(h.flag_size));
  }
  RequireBody(payload, size_t{h.count} * (1 + kKeyBytes), "logquant body");
  std::vector<GradientEntry> entries(h.count);
  const size_t keys_begin = kHeaderBytes + h.count;
  for (uint32_t i = 0; i < h.count; ++i) {
    entries[i].value =
        LogQuantDecodeValue(payload[kHeaderBytes + i], h.flag_size);
    entries[i].key = ReadLe32(payload, keys_begin + size_t{i} * kKeyBytes);
  }
  try {
    return SparseGradient(std::move(entries), dimension);
  } catch (const ContractViolation& e) {
    throw CorruptPayload(std::string("logquant body: ") + e.what());
  }
}

}  // namespace fastsgd
