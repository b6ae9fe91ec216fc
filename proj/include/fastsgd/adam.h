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

#ifndef FASTSGD_ADAM_H_
#define FASTSGD_ADAM_H_

#include <span>
#include <vector>

#include "fastsgd/sparse_gradient.h"

namespace fastsgd {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
};

/// First and second moment accumulators, one per model coordinate.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;

  explicit AdamState(size_t dimension = 0) : m(dimension, 0.0), v(dimension, 0.0) {}
};

/// Sparse Adam step over the coordinates present in `gradient`:
///
///   m_k <- b1 m_k + (1 - b1) g_k
///   v_k <- b2 v_k + (1 - b2) g_k^2
///   t_k <- t_k - lr * m_k / sqrt(v_k + eps)
///
/// There is no bias correction, and epsilon sits inside the square root.
/// Coordinates absent from `gradient` are left untouched.
void AdamStep(const AdamConfig& config, const SparseGradient& gradient,
              AdamState* state, std::span<double> theta);

/// Dense reference: every coordinate is updated, absent ones with g_k = 0.
void AdamStepDense(const AdamConfig& config, const SparseGradient& gradient,
                   AdamState* state, std::span<double> theta);

}  // namespace fastsgd

#endif  // FASTSGD_ADAM_H_
