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

#include "fastsgd/dataset.h"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string_view>

#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::vector<std::string_view> SplitTokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool ParseDouble(std::string_view s, double* out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*out);
}

bool ParseUint(std::string_view s, uint64_t* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Instance ParseLine(std::string_view line, size_t line_no, LabelMode mode) {
  std::vector<std::string_view> tokens = SplitTokens(line);
  Instance inst;
  double label = 0.0;
  if (!ParseDouble(tokens[0], &label)) {
    throw DataError("line " + std::to_string(line_no) + ": bad label '" +
                        std::string(tokens[0]) + "'",
                    line_no);
  }
  if (mode == LabelMode::kClassification) {
    if (label == 1.0) {
      label = 1.0;
    } else if (label == -1.0 || label == 0.0) {
      label = -1.0;
    } else {
      throw DataError("line " + std::to_string(line_no) +
                          ": classification label must be +1/1 or -1/0, got '" +
                          std::string(tokens[0]) + "'",
                      line_no);
    }
  }
  inst.label = label;
  inst.features.reserve(tokens.size() - 1);
  for (size_t t = 1; t < tokens.size(); ++t) {
    std::string_view tok = tokens[t];
    size_t colon = tok.find(':');
    uint64_t key = 0;
    double value = 0.0;
    if (colon == std::string_view::npos || !ParseUint(tok.substr(0, colon), &key) ||
        !ParseDouble(tok.substr(colon + 1), &value)) {
      throw DataError("line " + std::to_string(line_no) + ": bad feature '" +
                          std::string(tok) + "'",
                      line_no);
    }
    if (key == 0) {
      throw DataError("line " + std::to_string(line_no) +
                          ": feature keys are 1-based, got 0",
                      line_no);
    }
    uint64_t zero_based = key - 1;
    if (!inst.features.empty() && zero_based <= inst.features.back().key) {
      throw DataError("line " + std::to_string(line_no) +
                          ": feature keys not strictly increasing at '" +
                          std::string(tok) + "'",
                      line_no);
    }
    inst.features.push_back({zero_based, value});
  }
  return inst;
}

}  // namespace

Dataset ParseLibsvm(std::istream& in, LabelMode mode, const std::string& name) {
  Dataset ds;
  ds.name = name;
  std::string line;
  size_t line_no = 0;
  uint64_t max_key_plus_one = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    size_t hash = view.find('#');
    if (hash != std::string_view::npos) view = view.substr(0, hash);
    if (SplitTokens(view).empty()) continue;
    Instance inst = ParseLine(view, line_no, mode);
    if (!inst.features.empty()) {
      max_key_plus_one = std::max(max_key_plus_one, inst.features.back().key + 1);
    }
    ds.instances.push_back(std::move(inst));
  }
  if (ds.instances.empty()) {
    throw DataError("dataset '" + name + "' contains no instances", line_no);
  }
  ds.dimension = std::max<uint64_t>(max_key_plus_one, 1);
  return ds;
}

Dataset LoadLibsvm(const std::string& path, LabelMode mode) {
  // gzread passes plain files through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) {
    throw DataError("cannot open dataset file '" + path + "'");
  }
  std::string text;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(file, buf, sizeof(buf))) > 0) text.append(buf, n);
  int errnum = Z_OK;
  const char* msg = gzerror(file, &errnum);
  std::string error = (n < 0 && msg != nullptr) ? msg : "";
  gzclose(file);
  if (n < 0) {
    throw DataError("error reading '" + path + "': " + error);
  }
  std::istringstream in(text);
  return ParseLibsvm(in, mode, path);
}

void WriteLibsvm(const Dataset& dataset, std::ostream& out) {
  for (const Instance& inst : dataset.instances) {
    out << FormatDouble(inst.label);
    for (const Feature& f : inst.features) {
      out << ' ' << (f.key + 1) << ':' << FormatDouble(f.value);
    }
    out << '\n';
  }
}

void SeededShuffle(std::vector<size_t>* items, std::mt19937_64* rng) {
  for (size_t i = items->size(); i > 1; --i) {
    size_t j = static_cast<size_t>((*rng)() % i);
    std::swap((*items)[i - 1], (*items)[j]);
  }
}

std::vector<Shard> Partition(const Dataset& dataset, size_t workers,
                             uint64_t seed) {
  if (workers == 0) throw ConfigError("worker count must be >= 1");
  if (workers > dataset.size()) {
    throw ConfigError("worker count " + std::to_string(workers) +
                      " exceeds instance count " +
                      std::to_string(dataset.size()));
  }
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  SeededShuffle(&order, &rng);
  std::vector<Shard> shards(workers);
  for (size_t w = 0; w < workers; ++w) {
    shards[w].owner = w;
    shards[w].indices.reserve(order.size() / workers + 1);
  }
  for (size_t i = 0; i < order.size(); ++i) {
    shards[i % workers].indices.push_back(order[i]);
  }
  return shards;
}

TrainTestSplit SplitTrainTest(const Dataset& dataset, double train_fraction,
                              uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ConfigError("train fraction must be in (0, 1]");
  }
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  SeededShuffle(&order, &rng);
  size_t n_train = static_cast<size_t>(
      std::llround(train_fraction * static_cast<double>(dataset.size())));
  n_train = std::clamp<size_t>(n_train, 1, dataset.size());
  TrainTestSplit split;
  split.train.dimension = split.test.dimension = dataset.dimension;
  split.train.name = dataset.name + ":train";
  split.test.name = dataset.name + ":test";
  for (size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? split.train : split.test)
        .instances.push_back(dataset.instances[order[i]]);
  }
  return split;
}

}  // namespace fastsgd
