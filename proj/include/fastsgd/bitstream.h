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

#ifndef FASTSGD_BITSTREAM_H_
#define FASTSGD_BITSTREAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fastsgd {

/// Append-only MSB-first bit writer. The final partial byte is always
/// zero-padded, so `bytes().size() == ceil(bit_count() / 8)`.
class BitWriter {
 public:
  BitWriter() = default;

  /// Appends the `width` low-order bits of `value`, most significant first.
  /// Throws ContractViolation if `width > 64` or `value >= 2^width`.
  void WriteBits(uint64_t value, unsigned width);

  size_t bit_count() const { return bit_count_; }
  const std::vector<uint8_t>& bytes() const { return buffer_; }
  std::vector<uint8_t> TakeBytes() && { return std::move(buffer_); }

 private:
  std::vector<uint8_t> buffer_;
  size_t bit_count_ = 0;
};

/// Sequential MSB-first reader over a borrowed byte buffer.
class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> buffer) : buffer_(buffer) {}

  /// Throws TruncatedStream if fewer than `width` bits remain.
  uint64_t ReadBits(unsigned width);

  size_t bit_position() const { return cursor_; }
  size_t bits_remaining() const { return buffer_.size() * 8 - cursor_; }

 private:
  std::span<const uint8_t> buffer_;
  size_t cursor_ = 0;
};

}  // namespace fastsgd

#endif  // FASTSGD_BITSTREAM_H_
