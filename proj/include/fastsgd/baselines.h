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

#ifndef FASTSGD_BASELINES_H_
#define FASTSGD_BASELINES_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fastsgd/codec.h"
#include "fastsgd/sparse_gradient.h"
#include "fastsgd/wire_format.h"

namespace fastsgd {

struct CodecKind {
  CodecId id = CodecId::kFastSgd;
  // Top-k: absolute count when > 0, otherwise ceil(fraction * dimension).
  uint64_t topk_count = 0;
  double topk_fraction = 0.001;
  // LogQuant: total bits per value, sign included.
  unsigned logquant_bits = 8;

  void Validate() const;
  std::string ToString() const;
};

/// Parses "fastsgd", "identity", "topk", "logquant".
CodecId ParseCodecId(const std::string& name);

/// Common encode/decode surface used by the training simulator and bench.
class GradientCodec {
 public:
  virtual ~GradientCodec() = default;
  virtual CodecId id() const = 0;
  virtual std::vector<uint8_t> Encode(const SparseGradient& gradient) const = 0;
  virtual SparseGradient Decode(std::span<const uint8_t> payload,
                                uint64_t dimension) const = 0;
};

std::unique_ptr<GradientCodec> MakeCodec(const CodecKind& kind,
                                         const CodecConfig& config);

// Identity: d x (uint32 LE key, double LE value). Exact.
std::vector<uint8_t> IdentityCompress(const SparseGradient& gradient);
SparseGradient IdentityDecompress(std::span<const uint8_t> payload,
                                  uint64_t dimension);

// Top-k: the k largest |v| (ties to the smaller key), values as raw doubles
// followed by fastsgd key bits.
SparseGradient TopKSelect(const SparseGradient& gradient, uint64_t k);
std::vector<uint8_t> TopKCompress(const SparseGradient& gradient, uint64_t k,
                                  unsigned flag_size);
SparseGradient TopKDecompress(std::span<const uint8_t> payload,
                              uint64_t dimension);

// LogQuant: sign bit plus a biased exponent round(log2 |v|) clamped to the
// signed range of (bits - 1) bits; keys as uint32 LE.
uint8_t LogQuantEncodeValue(double value, unsigned bits = 8);
double LogQuantDecodeValue(uint8_t code, unsigned bits = 8);
std::vector<uint8_t> LogQuantCompress(const SparseGradient& gradient,
                                      unsigned bits = 8);
SparseGradient LogQuantDecompress(std::span<const uint8_t> payload,
                                  uint64_t dimension);

}  // namespace fastsgd

#endif  // FASTSGD_BASELINES_H_
