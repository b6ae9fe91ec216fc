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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include "fastsgd/bench.h"
#include "fastsgd/errors.h"
#include "fastsgd/wire_format.h"

namespace fastsgd::cli {
namespace {

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void AddCodecOptions(CLI::App* app, CodecFlags* f) {
  app->add_option("--codec", f->codec, "fastsgd, identity, topk or logquant")
      ->check(CLI::IsMember({"fastsgd", "identity", "topk", "logquant"}))
      ->capture_default_str();
  app->add_option("--base", f->base, "Logarithm base b (> 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--tau", f->tau, "Level threshold tau in [1, 127]")
      ->check(CLI::Range(1u, 127u))
      ->capture_default_str();
  app->add_option("--flag-size", f->flag_size, "Length flag bits l in [1, 5]")
      ->check(CLI::Range(1u, 5u))
      ->capture_default_str();
  app->add_option("--topk-fraction", f->topk_fraction,
                  "Top-k: fraction of the dimension to keep")
      ->capture_default_str();
  app->add_option("--topk-count", f->topk_count,
                  "Top-k: absolute count (overrides the fraction when > 0)")
      ->capture_default_str();
  app->add_option("--logquant-bits", f->logquant_bits,
                  "LogQuant bits per value in [2, 8]")
      ->check(CLI::Range(2u, 8u))
      ->capture_default_str();
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write '" + path + "'");
}

int Dispatch(CLI::App* app, const std::vector<std::string>& rest,
             std::ostream& out, std::ostream& err,
             const std::function<int()>& run) {
  std::vector<std::string> reversed(rest.rbegin(), rest.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return run();
}

}  // namespace

void AddTrainOptions(CLI::App* app, TrainFlags* f) {
  app->set_config("--config", "", "Read flags from a 'key = value' file");
  app->allow_config_extras(CLI::config_extras_mode::error);
  app->add_option("--data", f->data, "LIBSVM training file (plain or gzip)");
  app->add_option("--test", f->test,
                  "Separate LIBSVM test file; otherwise a seeded split of --data");
  app->add_option("--out", f->out, "Output prefix for metrics and summary")
      ->capture_default_str();
  app->add_option("--model", f->model, "linear, lr or svm")
      ->check(CLI::IsMember({"linear", "lr", "logistic", "svm"}))
      ->capture_default_str();
  app->add_option("--label-mode", f->label_mode, "classification or regression")
      ->check(CLI::IsMember({"classification", "regression"}))
      ->capture_default_str();
  app->add_option("--lambda", f->lambda, "L2 regularizer")->capture_default_str();
  app->add_option("--lr", f->learning_rate, "Adam learning rate")
      ->capture_default_str();
  app->add_option("--beta1", f->beta1, "Adam beta1")->capture_default_str();
  app->add_option("--beta2", f->beta2, "Adam beta2")->capture_default_str();
  app->add_option("--epsilon", f->epsilon, "Adam epsilon")->capture_default_str();
  app->add_option("--workers", f->workers, "Number of simulated workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--batch-fraction", f->batch_fraction,
                  "Per-worker batch as a fraction of its shard")
      ->capture_default_str();
  app->add_option("--epochs", f->epochs, "Training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--train-fraction", f->train_fraction,
                  "Train share of a seeded split when --test is absent")
      ->capture_default_str();
  app->add_option("--seed", f->seed, "Random seed")->capture_default_str();
  app->add_flag("--compress-broadcast", f->compress_broadcast,
                "Encode the aggregated gradient on the way back to workers");
  app->add_flag("--serial", f->serial, "Run workers on the calling thread");
  app->add_option("--synthetic-instances", f->synthetic_instances,
                  "Generate a separable dataset of this size instead of --data")
      ->capture_default_str();
  app->add_option("--synthetic-dimension", f->synthetic_dimension,
                  "Dimension of the generated dataset")
      ->capture_default_str();
  app->add_option("--synthetic-nonzeros", f->synthetic_nonzeros,
                  "Nonzeros per generated instance")
      ->capture_default_str();
  app->add_flag("--print-config", f->print_config,
                "Print the effective configuration as a config file and exit")
      ->configurable(false);
  AddCodecOptions(app, &f->codec);
}

void AddBenchOptions(CLI::App* app, BenchFlags* f) {
  app->set_config("--config", "", "Read flags from a 'key = value' file");
  app->allow_config_extras(CLI::config_extras_mode::error);
  app->add_option("--entries", f->entries, "Nonzeros D in the gradient")
      ->capture_default_str();
  app->add_option("--dimension", f->dimension, "Parameter count D_m")
      ->capture_default_str();
  app->add_option("--distribution", f->distribution, "lognormal or uniform")
      ->check(CLI::IsMember({"lognormal", "uniform"}))
      ->capture_default_str();
  app->add_option("--sigma", f->sigma, "Log-normal sigma")->capture_default_str();
  app->add_option("--keys", f->keys, "random, even or geometric key layout")
      ->check(CLI::IsMember({"random", "even", "geometric"}))
      ->capture_default_str();
  app->add_option("--mean-gap", f->mean_gap, "Mean key gap for geometric keys")
      ->capture_default_str();
  app->add_option("--seed", f->seed, "Random seed")->capture_default_str();
  app->add_option("--codecs", f->codecs, "Codecs to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"fastsgd", "identity", "topk", "logquant"}));
  app->add_option("--repeats", f->repeats, "Timing repeats (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--write-payload", f->write_payload,
                  "Also write the fastsgd payload of the gradient to this file");
  AddCodecOptions(app, &f->codec);
}

void AddInspectOptions(CLI::App* app, InspectFlags* f) {
  app->add_option("path", f->path, "Compressed gradient file")->required();
  app->add_option("--base", f->base,
                  "Base used at encode time (not stored in the frame)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--show", f->show, "Number of decoded entries to print")
      ->capture_default_str();
}

CodecKind ToCodecKind(const CodecFlags& f) {
  CodecKind kind;
  kind.id = ParseCodecId(f.codec);
  kind.topk_count = f.topk_count;
  kind.topk_fraction = f.topk_fraction;
  kind.logquant_bits = f.logquant_bits;
  kind.Validate();
  return kind;
}

CodecConfig ToCodecConfig(const CodecFlags& f) {
  CodecConfig c;
  c.base = f.base;
  c.threshold = f.tau;
  c.flag_size = f.flag_size;
  c.Validate();
  return c;
}

TrainConfig ToTrainConfig(const TrainFlags& f) {
  TrainConfig c;
  c.model.type = ParseModelType(f.model);
  c.model.lambda = f.lambda;
  c.codec = ToCodecKind(f.codec);
  c.codec_config = ToCodecConfig(f.codec);
  c.adam.learning_rate = f.learning_rate;
  c.adam.beta1 = f.beta1;
  c.adam.beta2 = f.beta2;
  c.adam.epsilon = f.epsilon;
  c.workers = f.workers;
  c.batch_fraction = f.batch_fraction;
  c.epochs = f.epochs;
  c.seed = f.seed;
  c.compress_broadcast = f.compress_broadcast;
  c.parallel_workers = !f.serial;
  c.Validate();
  return c;
}

int CmdTrain(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  TrainConfig config;
  try {
    config = ToTrainConfig(f);
    if (f.data.empty() && f.synthetic_instances == 0) {
      throw ConfigError("train needs --data or --synthetic-instances");
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  LabelMode mode = f.label_mode == "regression" ? LabelMode::kRegression
                                                : LabelMode::kClassification;
  TrainTestSplit split;
  try {
    if (f.synthetic_instances > 0) {
      SyntheticDatasetSpec spec;
      spec.instances = f.synthetic_instances;
      spec.dimension = f.synthetic_dimension;
      spec.nonzeros_per_instance = f.synthetic_nonzeros;
      spec.seed = f.seed;
      split = SplitTrainTest(MakeSeparableDataset(spec), f.train_fraction, f.seed);
    } else if (!f.test.empty()) {
      split.train = LoadLibsvm(f.data, mode);
      split.test = LoadLibsvm(f.test, mode);
      uint64_t dim = std::max(split.train.dimension, split.test.dimension);
      split.train.dimension = split.test.dimension = dim;
    } else {
      split = SplitTrainTest(LoadLibsvm(f.data, mode), f.train_fraction, f.seed);
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  TrainResult result;
  try {
    result = RunTraining(split.train, split.test, config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  RunSummary summary = EpochReport(result.rounds);

  out << "model=" << ModelTypeName(config.model.type)
      << " codec=" << config.codec.ToString() << " workers=" << config.workers
      << " train=" << split.train.size() << " test=" << split.test.size()
      << " dimension=" << split.train.dimension << "\n";
  out << "epoch 0: validation_loss=" << Num(result.initial_validation_loss)
      << "\n";
  size_t first = 0;
  for (size_t e = 0; e < summary.epochs; ++e) {
    size_t last = first;
    while (last < result.rounds.size() && result.rounds[last].epoch == e) ++last;
    RunSummary epoch = EpochReport(
        std::span<const RoundMetrics>(result.rounds).subspan(first, last - first));
    out << "epoch " << (e + 1) << ": validation_loss="
        << Num(epoch.final_validation_loss)
        << " ratio=" << Num(epoch.compression_ratio)
        << " ratio_vs_64bit=" << Num(epoch.ratio_vs_64bit) << "\n";
    first = last;
  }

  try {
    std::ostringstream metrics, timing;
    WriteMetricsCsv(result.rounds, metrics);
    WriteTimingCsv(result.rounds, timing);
    WriteFile(f.out + ".metrics.csv", metrics.str());
    WriteFile(f.out + ".timing.csv", timing.str());
    WriteFile(f.out + ".summary.json",
              SummaryJson(summary, config, result.initial_validation_loss) + "\n");
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  out << "wrote " << f.out << ".metrics.csv, " << f.out << ".timing.csv, "
      << f.out << ".summary.json\n";
  return kExitOk;
}

int CmdBenchCodec(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  BenchSpec spec;
  try {
    spec.gradient.entries = f.entries;
    spec.gradient.dimension = f.dimension;
    spec.gradient.values = ParseValueDistribution(f.distribution);
    spec.gradient.lognormal_sigma = f.sigma;
    spec.gradient.keys = f.keys == "even"        ? KeyLayout::kEvenlySpaced
                         : f.keys == "geometric" ? KeyLayout::kGeometricGaps
                                                 : KeyLayout::kRandomSubset;
    spec.gradient.mean_gap = f.mean_gap;
    spec.gradient.seed = f.seed;
    spec.config = ToCodecConfig(f.codec);
    spec.repeats = f.repeats;
    for (const std::string& name : f.codecs) {
      CodecFlags codec_flags = f.codec;
      codec_flags.codec = name;
      spec.codecs.push_back(ToCodecKind(codec_flags));
    }
    std::vector<BenchRow> rows = RunCodecBench(spec);
    out << "synthetic gradient: D=" << f.entries << " D_m=" << f.dimension
        << " values=" << f.distribution << " keys=" << f.keys
        << " seed=" << f.seed << "\n";
    PrintBenchTable(rows, out);
    if (!f.write_payload.empty()) {
      std::vector<uint8_t> payload =
          SerializeCompressed(Compress(MakeSyntheticGradient(spec.gradient), spec.config));
      WriteFile(f.write_payload, std::string(payload.begin(), payload.end()));
      out << "wrote " << f.write_payload << " (" << payload.size() << " bytes)\n";
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int CmdInspect(const InspectFlags& f, std::ostream& out, std::ostream& err) {
  std::vector<uint8_t> bytes;
  try {
    bytes = ReadFileBytes(f.path);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    FrameHeader h = ParseHeader(bytes);
    out << "file: " << f.path << " (" << bytes.size() << " bytes)\n";
    out << "codec: " << CodecIdName(h.codec) << "\n";
    out << "version: " << unsigned{h.version} << "\n";
    out << "flag_size: " << unsigned{h.flag_size} << "\n";
    out << "max_bits: " << unsigned{h.max_bits} << "\n";
    out << "count: " << h.count << "\n";
    out << "sum: " << Num(h.sum) << "\n";

    SparseGradient decoded;
    std::vector<unsigned> levels_per_entry;
    const uint64_t any_dimension = ~uint64_t{0};
    if (h.codec == CodecId::kFastSgd) {
      CompressedGradient c = ParseCompressed(bytes);
      size_t key_bits_used = 0;
      if (c.count > 0) {
        std::vector<uint64_t> keys =
            DecodeKeys(c.key_bytes, c.count, c.max_bits, c.flag_size);
        key_bits_used = EncodeKeys(keys, c.flag_size).bit_count;
        out << "length_levels:";
        for (unsigned w : LengthLevels(c.max_bits, c.flag_size)) out << ' ' << w;
        out << "\n";
      }
      out << "sections: header " << 8 * kHeaderBytes << " bits, values "
          << 8 * c.value_bytes.size() << " bits, keys "
          << 8 * c.key_bytes.size() << " bits (" << key_bits_used << " used, "
          << 8 * c.key_bytes.size() - key_bits_used << " padding)\n";
      CodecConfig config;
      config.base = f.base;
      decoded = Decompress(c, config, any_dimension);
      for (uint8_t byte : c.value_bytes) levels_per_entry.push_back(byte & 0x7Fu);
      out << "base: " << Num(f.base) << " (from --base)\n";
    } else {
      CodecConfig config;
      std::unique_ptr<GradientCodec> codec =
          MakeCodec(CodecKind{h.codec}, config);
      decoded = codec->Decode(bytes, any_dimension);
      out << "sections: header " << 8 * kHeaderBytes << " bits, body "
          << 8 * (bytes.size() - kHeaderBytes) << " bits\n";
    }

    size_t shown = std::min(f.show, decoded.size());
    out << "entries (first " << shown << " of " << decoded.size() << "):\n";
    for (size_t i = 0; i < shown; ++i) {
      const GradientEntry& e = decoded.entries()[i];
      out << "  key=" << e.key;
      if (!levels_per_entry.empty()) out << " level=" << levels_per_entry[i];
      out << " value=" << Num(e.value) << "\n";
    }
  } catch (const TruncatedStream& e) {
    err << "error: truncated file '" << f.path << "': " << e.what() << "\n";
    return kExitData;
  } catch (const CorruptPayload& e) {
    err << "error: corrupt file '" << f.path << "': " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  static const char* kUsage =
      "usage: fastsgd <command> [options]\n"
      "commands:\n"
      "  train        run simulated data-parallel training\n"
      "  bench-codec  time and size codecs on a synthetic gradient\n"
      "  inspect      dump a compressed gradient file\n"
      "Run 'fastsgd <command> --help' for command options.\n";
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    (args.empty() ? err : out) << kUsage;
    return args.empty() ? kExitUsage : kExitOk;
  }
  const std::string& command = args[0];
  std::vector<std::string> rest(args.begin() + 1, args.end());
  if (command == "train") {
    CLI::App app("Simulated data-parallel SGD training", "fastsgd train");
    TrainFlags flags;
    AddTrainOptions(&app, &flags);
    return Dispatch(&app, rest, out, err, [&] {
      if (flags.print_config) {
        out << app.config_to_str(true, false);
        return kExitOk;
      }
      return CmdTrain(flags, out, err);
    });
  }
  if (command == "bench-codec") {
    CLI::App app("Codec size and speed on a synthetic gradient",
                 "fastsgd bench-codec");
    BenchFlags flags;
    AddBenchOptions(&app, &flags);
    return Dispatch(&app, rest, out, err,
                    [&] { return CmdBenchCodec(flags, out, err); });
  }
  if (command == "inspect") {
    CLI::App app("Dump a compressed gradient file", "fastsgd inspect");
    InspectFlags flags;
    AddInspectOptions(&app, &flags);
    return Dispatch(&app, rest, out, err,
                    [&] { return CmdInspect(flags, out, err); });
  }
  err << "error: unknown command '" << command << "'\n" << kUsage;
  return kExitUsage;
}

}  // namespace fastsgd::cli
