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

#include "fastsgd/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace fastsgd {
namespace {

using Clock = std::chrono::steady_clock;

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
double MedianSeconds(size_t repeats, Fn&& fn) {
  std::vector<double> times;
  for (size_t r = 0; r < std::max<size_t>(repeats, 1); ++r) {
    auto t0 = Clock::now();
    fn();
    times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return Median(std::move(times));
}

}  // namespace

double MedianEncodeSeconds(const GradientCodec& codec,
                           const SparseGradient& gradient, size_t repeats) {
  volatile size_t sink = 0;
  return MedianSeconds(repeats, [&] { sink = codec.Encode(gradient).size(); });
}

std::vector<BenchRow> RunCodecBench(const BenchSpec& spec) {
  SparseGradient gradient = MakeSyntheticGradient(spec.gradient);
  const size_t identity_bytes = IdentityCompress(gradient).size();
  const double entries = static_cast<double>(std::max<size_t>(gradient.size(), 1));
  std::vector<BenchRow> rows;
  for (const CodecKind& kind : spec.codecs) {
    std::unique_ptr<GradientCodec> codec = MakeCodec(kind, spec.config);
    std::vector<uint8_t> payload = codec->Encode(gradient);
    SparseGradient decoded = codec->Decode(payload, gradient.dimension());
    BenchRow row;
    row.codec = kind.ToString();
    row.entries = gradient.size();
    row.retained = decoded.size();
    row.payload_bytes = payload.size();
    row.encode_ns_per_entry =
        MedianEncodeSeconds(*codec, gradient, spec.repeats) * 1e9 / entries;
    row.decode_ns_per_entry =
        MedianSeconds(spec.repeats,
                      [&] { decoded = codec->Decode(payload, gradient.dimension()); }) *
        1e9 / entries;
    row.ratio = static_cast<double>(identity_bytes) /
                static_cast<double>(payload.size());
    row.ratio_vs_64bit = 64.0 * static_cast<double>(gradient.size()) /
                         (8.0 * static_cast<double>(payload.size()));
    rows.push_back(row);
  }
  return rows;
}

void PrintBenchTable(const std::vector<BenchRow>& rows, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %10s %10s %12s %12s %12s %10s %10s\n",
                "codec", "entries", "retained", "bytes", "enc_ns/ent",
                "dec_ns/ent", "ratio", "ratio64");
  out << line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof(line),
                  "%-24s %10zu %10zu %12zu %12.2f %12.2f %10.3f %10.3f\n",
                  r.codec.c_str(), r.entries, r.retained, r.payload_bytes,
                  r.encode_ns_per_entry, r.decode_ns_per_entry, r.ratio,
                  r.ratio_vs_64bit);
    out << line;
  }
}

}  // namespace fastsgd
