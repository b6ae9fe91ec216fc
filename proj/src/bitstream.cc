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

#include "fastsgd/bitstream.h"

#include <string>

#include "fastsgd/errors.h"

namespace fastsgd {

void BitWriter::WriteBits(uint64_t value, unsigned width) {
  if (width > 64) {
    throw ContractViolation("WriteBits: width " + std::to_string(width) +
                            " exceeds 64");
  }
  if (width < 64 && (value >> width) != 0) {
    throw ContractViolation("WriteBits: value " + std::to_string(value) +
                            " does not fit in " + std::to_string(width) +
                            " bits");
  }
  unsigned remaining = width;
  while (remaining > 0) {
    size_t offset = bit_count_ % 8;
    if (offset == 0) buffer_.push_back(0);
    unsigned room = 8 - static_cast<unsigned>(offset);
    unsigned take = remaining < room ? remaining : room;
    // Next `take` bits of value, counted from its most significant end.
    uint64_t chunk = (value >> (remaining - take)) & ((uint64_t{1} << take) - 1);
    buffer_.back() |= static_cast<uint8_t>(chunk << (room - take));
    remaining -= take;
    bit_count_ += take;
  }
}

uint64_t BitReader::ReadBits(unsigned width) {
  if (width > 64) {
    throw ContractViolation("ReadBits: width " + std::to_string(width) +
                            " exceeds 64");
  }
  if (width > bits_remaining()) {
    throw TruncatedStream("ReadBits: requested " + std::to_string(width) +
                          " bits at bit " + std::to_string(cursor_) +
                          ", only " + std::to_string(bits_remaining()) +
                          " remain");
  }
  uint64_t out = 0;
  unsigned remaining = width;
  while (remaining > 0) {
    size_t offset = cursor_ % 8;
    unsigned room = 8 - static_cast<unsigned>(offset);
    unsigned take = remaining < room ? remaining : room;
    uint8_t byte = buffer_[cursor_ / 8];
    uint64_t chunk = (byte >> (room - take)) & ((1u << take) - 1);
    out = (out << take) | chunk;
    remaining -= take;
    cursor_ += take;
  }
  return out;
}

}  // namespace fastsgd
