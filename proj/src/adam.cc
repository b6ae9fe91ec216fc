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

#include "fastsgd/adam.h"

#include <cmath>
#include <string>

#include "fastsgd/errors.h"

namespace fastsgd {
namespace {

void CheckShapes(const SparseGradient& gradient, const AdamState& state,
                 std::span<double> theta) {
  if (state.m.size() != theta.size() || state.v.size() != theta.size()) {
    throw ContractViolation("AdamStep: state and model sizes differ");
  }
  if (!gradient.empty() && gradient.entries().back().key >= theta.size()) {
    throw ContractViolation("AdamStep: gradient key " +
                            std::to_string(gradient.entries().back().key) +
                            " outside model dimension " +
                            std::to_string(theta.size()));
  }
}

inline void UpdateCoordinate(const AdamConfig& c, double g, double* m,
                             double* v, double* theta) {
  *m = c.beta1 * *m + (1.0 - c.beta1) * g;
  *v = c.beta2 * *v + (1.0 - c.beta2) * g * g;
  *theta -= c.learning_rate * *m / std::sqrt(*v + c.epsilon);
}

}  // namespace

void AdamConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

void AdamStep(const AdamConfig& config, const SparseGradient& gradient,
              AdamState* state, std::span<double> theta) {
  CheckShapes(gradient, *state, theta);
  for (const GradientEntry& e : gradient.entries()) {
    UpdateCoordinate(config, e.value, &state->m[e.key], &state->v[e.key],
                     &theta[e.key]);
  }
}

void AdamStepDense(const AdamConfig& config, const SparseGradient& gradient,
                   AdamState* state, std::span<double> theta) {
  CheckShapes(gradient, *state, theta);
  const auto& entries = gradient.entries();
  size_t next = 0;
  for (size_t k = 0; k < theta.size(); ++k) {
    double g = 0.0;
    if (next < entries.size() && entries[next].key == k) g = entries[next++].value;
    UpdateCoordinate(config, g, &state->m[k], &state->v[k], &theta[k]);
  }
}

}  // namespace fastsgd
