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

#include "fastsgd/wire_format.h"

#include <bit>
#include <string>

#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

constexpr uint8_t kMagic[4] = {'F', 'S', 'G', 'D'};

}  // namespace

const char* CodecIdName(CodecId id) {
  switch (id) {
    case CodecId::kFastSgd:
      return "fastsgd";
    case CodecId::kIdentity:
      return "identity";
    case CodecId::kTopK:
      return "topk";
    case CodecId::kLogQuant:
      return "logquant";
  }
  return "unknown";
}

void AppendLe32(uint32_t v, std::vector<uint8_t>* out) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void AppendLe64(uint64_t v, std::vector<uint8_t>* out) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t ReadLe32(std::span<const uint8_t> bytes, size_t offset) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t{bytes[offset + i]} << (8 * i);
  return v;
}

uint64_t ReadLe64(std::span<const uint8_t> bytes, size_t offset) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t{bytes[offset + i]} << (8 * i);
  return v;
}

void AppendHeader(const FrameHeader& header, std::vector<uint8_t>* out) {
  out->insert(out->end(), std::begin(kMagic), std::end(kMagic));
  out->push_back(header.version);
  out->push_back(header.flag_size);
  out->push_back(header.max_bits);
  out->push_back(static_cast<uint8_t>(header.codec));
  AppendLe32(header.count, out);
  AppendLe64(std::bit_cast<uint64_t>(header.sum), out);
}

FrameHeader ParseHeader(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw TruncatedStream("header ended early: " + std::to_string(bytes.size()) +
                          " of " + std::to_string(kHeaderBytes) +
                          " bytes present");
  }
  for (size_t i = 0; i < 4; ++i) {
    if (bytes[i] != kMagic[i]) {
      throw CorruptPayload("bad magic at byte offset " + std::to_string(i) +
                           ", expected \"FSGD\"");
    }
  }
  FrameHeader h;
  h.version = bytes[4];
  if (h.version != kWireVersion) {
    throw CorruptPayload("unsupported version " + std::to_string(h.version) +
                         " at byte offset 4");
  }
  h.flag_size = bytes[5];
  h.max_bits = bytes[6];
  if (bytes[7] > static_cast<uint8_t>(CodecId::kLogQuant)) {
    throw CorruptPayload("unknown codec id " + std::to_string(bytes[7]) +
                         " at byte offset 7");
  }
  h.codec = static_cast<CodecId>(bytes[7]);
  h.count = ReadLe32(bytes, 8);
  h.sum = std::bit_cast<double>(ReadLe64(bytes, 12));
  return h;
}

std::vector<uint8_t> SerializeCompressed(const CompressedGradient& c) {
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + c.value_bytes.size() + c.key_bytes.size());
  FrameHeader h;
  h.flag_size = static_cast<uint8_t>(c.flag_size);
  h.max_bits = static_cast<uint8_t>(c.max_bits);
  h.codec = CodecId::kFastSgd;
  h.count = c.count;
  h.sum = c.sum;
  AppendHeader(h, &out);
  out.insert(out.end(), c.value_bytes.begin(), c.value_bytes.end());
  out.insert(out.end(), c.key_bytes.begin(), c.key_bytes.end());
  return out;
}

CompressedGradient ParseCompressed(std::span<const uint8_t> bytes) {
  FrameHeader h = ParseHeader(bytes);
  if (h.codec != CodecId::kFastSgd) {
    throw CorruptPayload(std::string("expected fastsgd frame, found codec ") +
                         CodecIdName(h.codec) + " at byte offset 7");
  }
  CompressedGradient c;
  c.sum = h.sum;
  c.count = h.count;
  c.max_bits = h.max_bits;
  c.flag_size = h.flag_size;
  const size_t values_end = kHeaderBytes + size_t{h.count};
  if (bytes.size() < values_end) {
    throw TruncatedStream("value section ended early at byte offset " +
                          std::to_string(bytes.size()) + ", expected " +
                          std::to_string(h.count) + " value bytes from offset " +
                          std::to_string(kHeaderBytes));
  }
  c.value_bytes.assign(bytes.begin() + kHeaderBytes, bytes.begin() + values_end);
  c.key_bytes.assign(bytes.begin() + values_end, bytes.end());
  try {
    DecodeKeys(c.key_bytes, c.count, c.max_bits, c.flag_size);
  } catch (const TruncatedStream& e) {
    throw TruncatedStream("key section ended early (starts at byte offset " +
                          std::to_string(values_end) + ", " +
                          std::to_string(c.key_bytes.size()) +
                          " bytes present): " + e.what());
  } catch (const CorruptPayload& e) {
    throw CorruptPayload("key section starting at byte offset " +
                         std::to_string(values_end) + ": " + e.what());
  }
  return c;
}

}  // namespace fastsgd
