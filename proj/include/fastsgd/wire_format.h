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

// Framed container shared by every codec.
//
//   offset  size  field
//   0       4     magic "FSGD"
//   4       1     version (1)
//   5       1     flag size l (0 if unused)
//   6       1     max delta bit length M (0 if unused)
//   7       1     codec id (0 = fastsgd, the reserved byte of the base format)
//   8       4     entry count d, little-endian
//   12      8     sum of |v| as IEEE-754 double, little-endian
//   20      ...   codec body
//
// fastsgd body: d sign-magnitude value bytes, then ceil(key bits / 8) key
// bytes.

#ifndef FASTSGD_WIRE_FORMAT_H_
#define FASTSGD_WIRE_FORMAT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fastsgd/codec.h"

namespace fastsgd {

enum class CodecId : uint8_t {
  kFastSgd = 0,
  kIdentity = 1,
  kTopK = 2,
  kLogQuant = 3,
};

const char* CodecIdName(CodecId id);

inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kHeaderBytes = 20;

struct FrameHeader {
  uint8_t version = kWireVersion;
  uint8_t flag_size = 0;
  uint8_t max_bits = 0;
  CodecId codec = CodecId::kFastSgd;
  uint32_t count = 0;
  double sum = 0.0;

  bool operator==(const FrameHeader&) const = default;
};

void AppendHeader(const FrameHeader& header, std::vector<uint8_t>* out);

/// Throws TruncatedStream when fewer than kHeaderBytes are present and
/// CorruptPayload on bad magic, unknown version or unknown codec id.
FrameHeader ParseHeader(std::span<const uint8_t> bytes);

void AppendLe32(uint32_t v, std::vector<uint8_t>* out);
void AppendLe64(uint64_t v, std::vector<uint8_t>* out);
uint32_t ReadLe32(std::span<const uint8_t> bytes, size_t offset);
uint64_t ReadLe64(std::span<const uint8_t> bytes, size_t offset);

std::vector<uint8_t> SerializeCompressed(const CompressedGradient& compressed);

/// Parses and fully validates a fastsgd frame, including walking the key
/// records. Errors name the section that failed and its byte offset.
CompressedGradient ParseCompressed(std::span<const uint8_t> bytes);

}  // namespace fastsgd

#endif  // FASTSGD_WIRE_FORMAT_H_
