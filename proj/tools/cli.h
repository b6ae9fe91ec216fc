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

#ifndef FASTSGD_TOOLS_CLI_H_
#define FASTSGD_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastsgd/simulator.h"
#include "fastsgd/synthetic.h"

namespace fastsgd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Codec flags shared by `train` and `bench-codec`.
struct CodecFlags {
  std::string codec = "fastsgd";
  double base = 1.1;
  unsigned tau = 127;
  unsigned flag_size = 2;
  double topk_fraction = 0.001;
  uint64_t topk_count = 0;
  unsigned logquant_bits = 8;
};

struct TrainFlags {
  std::string data;
  std::string test;
  std::string out = "fastsgd_run";
  std::string model = "lr";
  std::string label_mode = "classification";
  double lambda = 0.01;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  size_t workers = 4;
  double batch_fraction = 0.10;
  size_t epochs = 20;
  double train_fraction = 0.7;
  uint64_t seed = 42;
  bool compress_broadcast = false;
  bool serial = false;
  size_t synthetic_instances = 0;  // > 0 replaces --data with generated data
  uint64_t synthetic_dimension = 10000;
  size_t synthetic_nonzeros = 20;
  bool print_config = false;
  CodecFlags codec;
};

struct BenchFlags {
  size_t entries = 100000;
  uint64_t dimension = 10000000;
  std::string distribution = "lognormal";
  double sigma = 1.0;
  std::string keys = "random";
  double mean_gap = 100.0;
  uint64_t seed = 1;
  std::vector<std::string> codecs = {"fastsgd", "identity", "topk", "logquant"};
  size_t repeats = 5;
  std::string write_payload;
  CodecFlags codec;
};

struct InspectFlags {
  std::string path;
  double base = 1.1;
  size_t show = 10;
};

/// Registers every train flag on `app`, including `--config FILE`, whose
/// `key = value` lines use the long flag names. Command-line flags override
/// file values; defaults fill the rest.
void AddTrainOptions(CLI::App* app, TrainFlags* flags);
void AddBenchOptions(CLI::App* app, BenchFlags* flags);
void AddInspectOptions(CLI::App* app, InspectFlags* flags);

/// Throws ConfigError on invalid combinations.
TrainConfig ToTrainConfig(const TrainFlags& flags);
CodecKind ToCodecKind(const CodecFlags& flags);
CodecConfig ToCodecConfig(const CodecFlags& flags);

int CmdTrain(const TrainFlags& flags, std::ostream& out, std::ostream& err);
int CmdBenchCodec(const BenchFlags& flags, std::ostream& out, std::ostream& err);
int CmdInspect(const InspectFlags& flags, std::ostream& out, std::ostream& err);

/// Entry point; `args` excludes the program name. Returns the exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fastsgd::cli

#endif  // FASTSGD_TOOLS_CLI_H_
