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

// Generalized linear models trained on sparse data.
//
//   model      per-instance loss            per-instance gradient
//   linear     1/2 (y - t.x)^2              -(y - t.x) x
//   logistic   log(1 + exp(-y t.x))         -y / (1 + exp(y t.x)) x
//   svm        max(0, 1 - y t.x)            -y x [y t.x < 1]
//
// Regularization is lazy: lambda * t_k is added only for coordinates k that
// appear in at least one batch instance, and the batch loss adds
// lambda/2 * t_k^2 over the same coordinates. That keeps batch gradients as
// sparse as the batch itself.

#ifndef FASTSGD_MODELS_H_
#define FASTSGD_MODELS_H_

#include <span>
#include <string>
#include <vector>

#include "fastsgd/dataset.h"
#include "fastsgd/sparse_gradient.h"

namespace fastsgd {

enum class ModelType { kLinear, kLogistic, kSvm };

/// Accepts "linear", "lr"/"logistic", "svm".
ModelType ParseModelType(const std::string& name);
const char* ModelTypeName(ModelType type);

struct ModelKind {
  ModelType type = ModelType::kLogistic;
  double lambda = 0.01;

  void Validate() const;
};

struct BatchResult {
  SparseGradient gradient;
  double loss = 0.0;  // summed data loss plus the lazy penalty
};

double Margin(std::span<const double> theta, const Instance& instance);
double InstanceLoss(ModelType type, double margin, double label);

/// Summed gradient and loss over `batch`. `theta.size()` is the dimension.
/// Throws EmptyInput on an empty batch and ContractViolation when a feature
/// key falls outside theta.
BatchResult BatchGradient(const ModelKind& kind, std::span<const double> theta,
                          std::span<const Instance* const> batch);
BatchResult BatchGradient(const ModelKind& kind, std::span<const double> theta,
                          std::span<const Instance> batch);

/// Mean unregularized per-instance loss.
double PredictLoss(const ModelKind& kind, std::span<const double> theta,
                   std::span<const Instance> data);

/// Fraction of instances whose sign(t.x) matches the label. Classification
/// only.
double Accuracy(std::span<const double> theta, std::span<const Instance> data);

}  // namespace fastsgd

#endif  // FASTSGD_MODELS_H_
