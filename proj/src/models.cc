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

#include "fastsgd/models.h"

#include <algorithm>
#include <cmath>

#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

// log(1 + exp(-z)) without overflow.
double Softplus(double z) {
  return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

// 1 / (1 + exp(z)) without overflow.
double InverseLogistic(double z) {
  if (z >= 0) {
    double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

// d(loss)/d(margin) for one instance.
double LossSlope(ModelType type, double margin, double label) {
  switch (type) {
    case ModelType::kLinear:
      return -(label - margin);
    case ModelType::kLogistic:
      return -label * InverseLogistic(label * margin);
    case ModelType::kSvm:
      return label * margin < 1.0 ? -label : 0.0;
  }
  return 0.0;
}

}  // namespace

ModelType ParseModelType(const std::string& name) {
  if (name == "linear") return ModelType::kLinear;
  if (name == "lr" || name == "logistic") return ModelType::kLogistic;
  if (name == "svm") return ModelType::kSvm;
  throw ConfigError("unknown model '" + name +
                    "' (expected linear, lr or svm)");
}

const char* ModelTypeName(ModelType type) {
  switch (type) {
    case ModelType::kLinear:
      return "linear";
    case ModelType::kLogistic:
      return "lr";
    case ModelType::kSvm:
      return "svm";
  }
  return "unknown";
}

void ModelKind::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("regularizer lambda must be >= 0");
  }
}

double Margin(std::span<const double> theta, const Instance& instance) {
  double m = 0.0;
  for (const Feature& f : instance.features) {
    if (f.key >= theta.size()) {
      throw ContractViolation("feature key " + std::to_string(f.key) +
                              " outside model dimension " +
                              std::to_string(theta.size()));
    }
    m += theta[f.key] * f.value;
  }
  return m;
}

double InstanceLoss(ModelType type, double margin, double label) {
  switch (type) {
    case ModelType::kLinear: {
      double r = label - margin;
      return 0.5 * r * r;
    }
    case ModelType::kLogistic:
      return Softplus(label * margin);
    case ModelType::kSvm:
      return std::max(0.0, 1.0 - label * margin);
  }
  return 0.0;
}

BatchResult BatchGradient(const ModelKind& kind, std::span<const double> theta,
                          std::span<const Instance* const> batch) {
  if (batch.empty()) throw EmptyInput("BatchGradient: empty batch");
  size_t nnz = 0;
  for (const Instance* inst : batch) nnz += inst->features.size();

  std::vector<GradientEntry> contributions;
  contributions.reserve(nnz);
  double loss = 0.0;
  for (const Instance* inst : batch) {
    double margin = Margin(theta, *inst);
    loss += InstanceLoss(kind.type, margin, inst->label);
    double slope = LossSlope(kind.type, margin, inst->label);
    for (const Feature& f : inst->features) {
      contributions.push_back({f.key, slope * f.value});
    }
  }
  std::stable_sort(contributions.begin(), contributions.end(),
                   [](const GradientEntry& a, const GradientEntry& b) {
                     return a.key < b.key;
                   });

  std::vector<GradientEntry> merged;
  for (size_t i = 0; i < contributions.size();) {
    uint64_t key = contributions[i].key;
    double g = 0.0;
    for (; i < contributions.size() && contributions[i].key == key; ++i) {
      g += contributions[i].value;
    }
    double t = theta[key];
    g += kind.lambda * t;
    loss += 0.5 * kind.lambda * t * t;
    merged.push_back({key, g});
  }
  return {SparseGradient(std::move(merged), theta.size()), loss};
}

BatchResult BatchGradient(const ModelKind& kind, std::span<const double> theta,
                          std::span<const Instance> batch) {
  std::vector<const Instance*> ptrs;
  ptrs.reserve(batch.size());
  for (const Instance& inst : batch) ptrs.push_back(&inst);
  return BatchGradient(kind, theta, std::span<const Instance* const>(ptrs));
}

double PredictLoss(const ModelKind& kind, std::span<const double> theta,
                   std::span<const Instance> data) {
  if (data.empty()) throw EmptyInput("PredictLoss: empty data");
  double total = 0.0;
  for (const Instance& inst : data) {
    total += InstanceLoss(kind.type, Margin(theta, inst), inst.label);
  }
  return total / static_cast<double>(data.size());
}

double Accuracy(std::span<const double> theta, std::span<const Instance> data) {
  if (data.empty()) return 0.0;
  size_t correct = 0;
  for (const Instance& inst : data) {
    double m = Margin(theta, inst);
    if ((m >= 0.0 ? 1.0 : -1.0) == inst.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace fastsgd
