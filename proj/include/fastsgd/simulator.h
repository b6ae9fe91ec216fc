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

// Bulk-synchronous data-parallel training with in-process workers.
//
// Every round, each worker computes the gradient of its sub-batch against
// the shared model, encodes it with the configured codec, and hands the
// payload to the driver. The driver decodes all payloads, averages them
// coordinate-wise, and applies one Adam step. Communication is simulated by
// counting payload bytes.

#ifndef FASTSGD_SIMULATOR_H_
#define FASTSGD_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fastsgd/adam.h"
#include "fastsgd/baselines.h"
#include "fastsgd/codec.h"
#include "fastsgd/dataset.h"
#include "fastsgd/models.h"
#include "fastsgd/sparse_gradient.h"

namespace fastsgd {

struct TrainConfig {
  ModelKind model;
  CodecKind codec;
  CodecConfig codec_config;
  AdamConfig adam;
  size_t workers = 4;
  double batch_fraction = 0.10;
  size_t epochs = 20;
  uint64_t seed = 42;
  // Also encode the aggregated gradient before applying it, as the driver
  // would when broadcasting it back to workers.
  bool compress_broadcast = false;
  // Give every worker the full training set instead of a disjoint shard.
  bool replicate_shards = false;
  // Run worker gradient/encode on one thread per worker.
  bool parallel_workers = true;

  void Validate() const;
};

struct RoundMetrics {
  size_t epoch = 0;
  size_t batch = 0;
  double train_loss = 0.0;       // batch objective per instance
  double validation_loss = 0.0;  // mean unregularized test loss after update
  uint64_t entries = 0;          // nonzeros across all worker gradients
  uint64_t retained = 0;         // nonzeros after decoding
  uint64_t uncompressed_bits = 0;  // identity payload of the raw gradients
  uint64_t compressed_bits = 0;    // payloads actually sent to the driver
  uint64_t baseline64_bits = 0;    // 64 bits per nonzero (int key + float)
  uint64_t broadcast_bits = 0;
  double compute_seconds = 0.0;
  double encode_seconds = 0.0;
  double decode_seconds = 0.0;
  double update_seconds = 0.0;
  double round_seconds = 0.0;
};

/// Gradients seen in one round, for tests and diagnostics.
struct RoundTrace {
  size_t epoch;
  size_t batch;
  const std::vector<SparseGradient>& raw;
  const std::vector<SparseGradient>& decoded;
  const SparseGradient& aggregate;
};

using RoundObserver = std::function<void(const RoundTrace&)>;

struct TrainResult {
  std::vector<RoundMetrics> rounds;
  std::vector<double> theta;
  double initial_validation_loss = 0.0;
};

/// Throws ConfigError on inconsistent configuration (dimension mismatch,
/// more workers than training instances, ...).
TrainResult RunTraining(const Dataset& train, const Dataset& test,
                        const TrainConfig& config,
                        const RoundObserver& observer = nullptr);

/// Coordinate-wise mean over `payloads.size()` gradients; absent keys count
/// as zero. Throws ContractViolation on mixed dimensions or no payloads.
SparseGradient Aggregate(std::span<const SparseGradient> payloads);

struct RunSummary {
  size_t rounds = 0;
  size_t epochs = 0;
  double avg_epoch_seconds = 0.0;
  uint64_t total_compressed_bytes = 0;
  uint64_t total_uncompressed_bytes = 0;
  double compression_ratio = 0.0;  // vs identity payloads
  double ratio_vs_64bit = 0.0;     // vs 64 bits per nonzero
  double compute_seconds = 0.0;
  double encode_seconds = 0.0;
  double decode_seconds = 0.0;
  double update_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<double> epoch_validation_loss;  // value after each epoch
  double final_validation_loss = 0.0;
};

/// Throws EmptyInput when no rounds were recorded.
RunSummary EpochReport(std::span<const RoundMetrics> rounds);

/// Deterministic per-round metrics (no timings).
void WriteMetricsCsv(std::span<const RoundMetrics> rounds, std::ostream& out);
/// Per-round time breakdown in seconds.
void WriteTimingCsv(std::span<const RoundMetrics> rounds, std::ostream& out);
std::string SummaryJson(const RunSummary& summary, const TrainConfig& config,
                        double initial_validation_loss);

}  // namespace fastsgd

#endif  // FASTSGD_SIMULATOR_H_
