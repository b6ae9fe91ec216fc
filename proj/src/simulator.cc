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

#include "fastsgd/simulator.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "fastsgd/errors.h"
#include "json.hpp"

namespace fastsgd {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double>(to - from).count();
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t BatchSeed(uint64_t seed, size_t epoch, size_t shard) {
  return SplitMix64(SplitMix64(SplitMix64(seed) ^ epoch) ^ shard);
}

size_t BatchesPerEpoch(double fraction) {
  return std::max<size_t>(
      1, static_cast<size_t>(std::ceil(1.0 / fraction - 1e-9)));
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct WorkerOutput {
  SparseGradient raw;
  std::vector<uint8_t> payload;
  uint64_t identity_bits = 0;
  double loss = 0.0;
  size_t instances = 0;
  double compute_seconds = 0.0;
  double encode_seconds = 0.0;
};

}  // namespace

void TrainConfig::Validate() const {
  model.Validate();
  codec.Validate();
  codec_config.Validate();
  adam.Validate();
  if (workers < 1) throw ConfigError("worker count must be >= 1");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) {
    throw ConfigError("batch fraction must be in (0, 1]");
  }
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
}

SparseGradient Aggregate(std::span<const SparseGradient> payloads) {
  if (payloads.empty()) throw ContractViolation("Aggregate: no payloads");
  const uint64_t dimension = payloads.front().dimension();
  size_t total = 0;
  for (const SparseGradient& p : payloads) {
    if (p.dimension() != dimension) {
      throw ContractViolation("Aggregate: payload dimensions differ");
    }
    total += p.size();
  }
  std::vector<GradientEntry> all;
  all.reserve(total);
  for (const SparseGradient& p : payloads) {
    all.insert(all.end(), p.entries().begin(), p.entries().end());
  }
  // Stable: equal keys are summed in worker order.
  std::stable_sort(all.begin(), all.end(),
                   [](const GradientEntry& a, const GradientEntry& b) {
                     return a.key < b.key;
                   });
  const double count = static_cast<double>(payloads.size());
  std::vector<GradientEntry> mean;
  for (size_t i = 0; i < all.size();) {
    uint64_t key = all[i].key;
    double sum = 0.0;
    for (; i < all.size() && all[i].key == key; ++i) sum += all[i].value;
    mean.push_back({key, sum / count});
  }
  return SparseGradient(std::move(mean), dimension);
}

TrainResult RunTraining(const Dataset& train, const Dataset& test,
                        const TrainConfig& config,
                        const RoundObserver& observer) {
  config.Validate();
  if (train.size() == 0) throw ConfigError("training set is empty");
  if (test.size() > 0 && test.dimension != train.dimension) {
    throw ConfigError("train/test dimension mismatch: " +
                      std::to_string(train.dimension) + " vs " +
                      std::to_string(test.dimension));
  }
  const size_t W = config.workers;
  std::vector<Shard> shards;
  if (config.replicate_shards) {
    std::vector<size_t> all(train.size());
    std::iota(all.begin(), all.end(), size_t{0});
    for (size_t w = 0; w < W; ++w) shards.push_back({w, all});
  } else {
    shards = Partition(train, W, SplitMix64(config.seed ^ 0x5348415244ull));
  }
  const std::vector<Instance>& validation =
      test.size() > 0 ? test.instances : train.instances;

  std::unique_ptr<GradientCodec> codec =
      MakeCodec(config.codec, config.codec_config);
  std::unique_ptr<GradientCodec> identity =
      MakeCodec(CodecKind{CodecId::kIdentity}, config.codec_config);

  TrainResult result;
  result.theta.assign(train.dimension, 0.0);
  AdamState adam(train.dimension);
  result.initial_validation_loss =
      PredictLoss(config.model, result.theta, validation);

  const size_t batches = BatchesPerEpoch(config.batch_fraction);
  std::vector<WorkerOutput> outputs(W);
  std::vector<std::vector<size_t>> order(W);

  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t w = 0; w < W; ++w) {
      order[w] = shards[w].indices;
      std::mt19937_64 rng(
          BatchSeed(config.seed, epoch, config.replicate_shards ? 0 : w));
      SeededShuffle(&order[w], &rng);
    }
    for (size_t b = 0; b < batches; ++b) {
      const auto round_start = Clock::now();
      RoundMetrics m;
      m.epoch = epoch;
      m.batch = b;

      auto work = [&](size_t w) {
        WorkerOutput& out = outputs[w];
        const size_t n = order[w].size();
        const size_t begin = b * n / batches, end = (b + 1) * n / batches;
        const auto t0 = Clock::now();
        std::vector<const Instance*> batch;
        batch.reserve(end - begin);
        for (size_t i = begin; i < end; ++i) {
          batch.push_back(&train.instances[order[w][i]]);
        }
        if (batch.empty()) {
          out.raw = SparseGradient(train.dimension);
          out.loss = 0.0;
        } else {
          BatchResult r = BatchGradient(config.model, result.theta, batch);
          out.raw = std::move(r.gradient);
          out.loss = r.loss;
        }
        out.instances = batch.size();
        const auto t1 = Clock::now();
        out.payload = codec->Encode(out.raw);
        const auto t2 = Clock::now();
        out.identity_bits = 8 * (kHeaderBytes + out.raw.size() * 12);
        out.compute_seconds = Seconds(t0, t1);
        out.encode_seconds = Seconds(t1, t2);
      };

      const auto parallel_start = Clock::now();
      if (config.parallel_workers && W > 1) {
        std::vector<std::thread> threads;
        threads.reserve(W);
        std::vector<std::exception_ptr> errors(W);
        for (size_t w = 0; w < W; ++w) {
          threads.emplace_back([&, w] {
            try {
              work(w);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
        for (std::thread& t : threads) t.join();
        for (const std::exception_ptr& e : errors) {
          if (e) std::rethrow_exception(e);
        }
      } else {
        for (size_t w = 0; w < W; ++w) work(w);
      }
      const double parallel_seconds = Seconds(parallel_start, Clock::now());

      // Attribute the parallel phase to compute vs encode in proportion to
      // the per-worker measurements so the breakdown partitions wall time.
      double compute_sum = 0.0, encode_sum = 0.0, loss_sum = 0.0;
      size_t instance_sum = 0;
      std::vector<SparseGradient> raw(W);
      for (size_t w = 0; w < W; ++w) {
        compute_sum += outputs[w].compute_seconds;
        encode_sum += outputs[w].encode_seconds;
        loss_sum += outputs[w].loss;
        instance_sum += outputs[w].instances;
        m.entries += outputs[w].raw.size();
        m.uncompressed_bits += outputs[w].identity_bits;
        m.compressed_bits += 8 * outputs[w].payload.size();
        m.baseline64_bits += 64 * outputs[w].raw.size();
        raw[w] = std::move(outputs[w].raw);
      }
      const double busy = compute_sum + encode_sum;
      m.compute_seconds = busy > 0 ? parallel_seconds * compute_sum / busy : 0.0;
      m.encode_seconds = busy > 0 ? parallel_seconds * encode_sum / busy : 0.0;
      m.train_loss =
          instance_sum > 0 ? loss_sum / static_cast<double>(instance_sum) : 0.0;

      const auto decode_start = Clock::now();
      std::vector<SparseGradient> decoded(W);
      for (size_t w = 0; w < W; ++w) {
        decoded[w] = codec->Decode(outputs[w].payload, train.dimension);
        m.retained += decoded[w].size();
      }
      SparseGradient aggregate = Aggregate(decoded);
      if (config.compress_broadcast) {
        std::vector<uint8_t> down = codec->Encode(aggregate);
        m.broadcast_bits = 8 * down.size();
        aggregate = codec->Decode(down, train.dimension);
      } else {
        m.broadcast_bits = 8 * (kHeaderBytes + aggregate.size() * 12);
      }
      const auto update_start = Clock::now();
      m.decode_seconds = Seconds(decode_start, update_start);

      AdamStep(config.adam, aggregate, &adam, result.theta);
      const auto update_end = Clock::now();
      m.update_seconds = Seconds(update_start, update_end);

      if (observer) observer(RoundTrace{epoch, b, raw, decoded, aggregate});

      m.validation_loss = PredictLoss(config.model, result.theta, validation);
      m.round_seconds = Seconds(round_start, Clock::now());
      result.rounds.push_back(m);
    }
  }
  return result;
}

RunSummary EpochReport(std::span<const RoundMetrics> rounds) {
  if (rounds.empty()) throw EmptyInput("EpochReport: no rounds recorded");
  RunSummary s;
  s.rounds = rounds.size();
  uint64_t compressed_bits = 0, uncompressed_bits = 0, baseline_bits = 0;
  for (size_t i = 0; i < rounds.size(); ++i) {
    const RoundMetrics& r = rounds[i];
    compressed_bits += r.compressed_bits;
    uncompressed_bits += r.uncompressed_bits;
    baseline_bits += r.baseline64_bits;
    s.compute_seconds += r.compute_seconds;
    s.encode_seconds += r.encode_seconds;
    s.decode_seconds += r.decode_seconds;
    s.update_seconds += r.update_seconds;
    s.total_seconds += r.round_seconds;
    bool last_of_epoch = i + 1 == rounds.size() || rounds[i + 1].epoch != r.epoch;
    if (last_of_epoch) s.epoch_validation_loss.push_back(r.validation_loss);
  }
  s.epochs = s.epoch_validation_loss.size();
  s.avg_epoch_seconds = s.total_seconds / static_cast<double>(s.epochs);
  s.total_compressed_bytes = (compressed_bits + 7) / 8;
  s.total_uncompressed_bytes = (uncompressed_bits + 7) / 8;
  s.compression_ratio =
      compressed_bits > 0 ? static_cast<double>(uncompressed_bits) /
                                static_cast<double>(compressed_bits)
                          : 0.0;
  s.ratio_vs_64bit = compressed_bits > 0
                         ? static_cast<double>(baseline_bits) /
                               static_cast<double>(compressed_bits)
                         : 0.0;
  s.final_validation_loss = rounds.back().validation_loss;
  return s;
}

void WriteMetricsCsv(std::span<const RoundMetrics> rounds, std::ostream& out) {
  out << "epoch,batch,train_loss,validation_loss,entries,retained,"
         "uncompressed_bits,compressed_bits,baseline64_bits,broadcast_bits\n";
  for (const RoundMetrics& r : rounds) {
    out << r.epoch << ',' << r.batch << ',' << FormatDouble(r.train_loss)
        << ',' << FormatDouble(r.validation_loss) << ',' << r.entries << ','
        << r.retained << ',' << r.uncompressed_bits << ',' << r.compressed_bits
        << ',' << r.baseline64_bits << ',' << r.broadcast_bits << '\n';
  }
}

void WriteTimingCsv(std::span<const RoundMetrics> rounds, std::ostream& out) {
  out << "epoch,batch,compute_seconds,encode_seconds,decode_seconds,"
         "update_seconds,round_seconds\n";
  for (const RoundMetrics& r : rounds) {
    out << r.epoch << ',' << r.batch << ',' << FormatDouble(r.compute_seconds)
        << ',' << FormatDouble(r.encode_seconds) << ','
        << FormatDouble(r.decode_seconds) << ','
        << FormatDouble(r.update_seconds) << ','
        << FormatDouble(r.round_seconds) << '\n';
  }
}

std::string SummaryJson(const RunSummary& s, const TrainConfig& c,
                        double initial_validation_loss) {
  nlohmann::json j;
  j["config"] = {
      {"model", ModelTypeName(c.model.type)},
      {"lambda", c.model.lambda},
      {"codec", c.codec.ToString()},
      {"base", c.codec_config.base},
      {"tau", c.codec_config.threshold},
      {"flag_size", c.codec_config.flag_size},
      {"workers", c.workers},
      {"batch_fraction", c.batch_fraction},
      {"epochs", c.epochs},
      {"learning_rate", c.adam.learning_rate},
      {"beta1", c.adam.beta1},
      {"beta2", c.adam.beta2},
      {"epsilon", c.adam.epsilon},
      {"seed", c.seed},
      {"compress_broadcast", c.compress_broadcast},
  };
  j["rounds"] = s.rounds;
  j["epochs"] = s.epochs;
  j["avg_epoch_seconds"] = s.avg_epoch_seconds;
  j["total_compressed_bytes"] = s.total_compressed_bytes;
  j["total_uncompressed_bytes"] = s.total_uncompressed_bytes;
  j["compression_ratio"] = s.compression_ratio;
  j["ratio_vs_64bit"] = s.ratio_vs_64bit;
  j["time_breakdown_seconds"] = {
      {"compute", s.compute_seconds}, {"encode", s.encode_seconds},
      {"decode", s.decode_seconds},   {"update", s.update_seconds},
      {"total", s.total_seconds},
  };
  j["initial_validation_loss"] = initial_validation_loss;
  j["epoch_validation_loss"] = s.epoch_validation_loss;
  j["final_validation_loss"] = s.final_validation_loss;
  return j.dump(2);
}

}  // namespace fastsgd
