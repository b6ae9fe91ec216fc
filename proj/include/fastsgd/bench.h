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

#ifndef FASTSGD_BENCH_H_
#define FASTSGD_BENCH_H_

#include <ostream>
#include <string>
#include <vector>

#include "fastsgd/baselines.h"
#include "fastsgd/codec.h"
#include "fastsgd/synthetic.h"

namespace fastsgd {

struct BenchSpec {
  SyntheticGradientSpec gradient;
  std::vector<CodecKind> codecs;
  CodecConfig config;
  size_t repeats = 5;
};

struct BenchRow {
  std::string codec;
  size_t entries = 0;
  size_t retained = 0;
  size_t payload_bytes = 0;
  double encode_ns_per_entry = 0.0;  // median over repeats
  double decode_ns_per_entry = 0.0;
  double ratio = 0.0;           // identity payload bytes / payload bytes
  double ratio_vs_64bit = 0.0;  // 64 bits per input entry / payload bits
};

/// Median wall time of `repeats` encodes of `gradient`.
double MedianEncodeSeconds(const GradientCodec& codec,
                           const SparseGradient& gradient, size_t repeats);

std::vector<BenchRow> RunCodecBench(const BenchSpec& spec);

void PrintBenchTable(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace fastsgd

#endif  // FASTSGD_BENCH_H_
