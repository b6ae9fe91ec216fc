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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fastsgd/errors.h"
#include "test_util.h"

namespace fastsgd {
namespace {

ModelKind Kind(ModelType type, double lambda) {
  ModelKind k;
  k.type = type;
  k.lambda = lambda;
  return k;
}

TEST(ModelsTest, LogisticAtZeroIsHalfLabel) {
  std::vector<double> theta(5, 0.0);
  std::vector<Instance> batch = {{{{1, 2.0}, {3, -4.0}}, 1.0}};
  BatchResult r = BatchGradient(Kind(ModelType::kLogistic, 0.0), theta, batch);
  EXPECT_DOUBLE_EQ(r.loss, std::log(2.0));
  EXPECT_EQ(r.gradient,
            SparseGradient::FromArrays({1, 3}, {-1.0, 2.0}, 5));  // -(y/2) x
}

TEST(ModelsTest, SvmBeyondMarginContributesNothing) {
  std::vector<double> theta = {2.0, 0.0};
  std::vector<Instance> batch = {{{{0, 1.0}}, 1.0}};  // y m = 2 >= 1
  BatchResult r = BatchGradient(Kind(ModelType::kSvm, 0.0), theta, batch);
  EXPECT_TRUE(r.gradient.empty());
  EXPECT_EQ(r.loss, 0.0);
}

TEST(ModelsTest, SvmInsideMarginUsesMinusYX) {
  std::vector<double> theta = {0.25, 0.0};
  std::vector<Instance> batch = {{{{0, 2.0}}, -1.0}};
  BatchResult r = BatchGradient(Kind(ModelType::kSvm, 0.0), theta, batch);
  EXPECT_EQ(r.gradient, SparseGradient::FromArrays({0}, {2.0}, 2));
  EXPECT_DOUBLE_EQ(r.loss, 1.5);
}

TEST(ModelsTest, LinearGradientAndHalfSquaredLoss) {
  std::vector<double> theta = {0.0};
  std::vector<Instance> batch = {{{{0, 2.0}}, 3.0}};
  BatchResult r = BatchGradient(Kind(ModelType::kLinear, 0.0), theta, batch);
  EXPECT_EQ(r.gradient, SparseGradient::FromArrays({0}, {-6.0}, 1));
  // The loss whose derivative is -(y - m) x is (y - m)^2 / 2.
  EXPECT_DOUBLE_EQ(r.loss, 4.5);
}

TEST(ModelsTest, LazyRegularizationOnlyTouchesBatchCoordinates) {
  std::vector<double> theta = {1.0, 2.0, 3.0, 4.0};
  std::vector<Instance> batch = {{{{1, 1.0}}, 1.0}};
  BatchResult r = BatchGradient(Kind(ModelType::kLinear, 0.5), theta, batch);
  // -(1 - 2) * 1 + 0.5 * 2 = 2
  EXPECT_EQ(r.gradient, SparseGradient::FromArrays({1}, {2.0}, 4));
  EXPECT_DOUBLE_EQ(r.loss, 0.5 + 0.25 * 4.0);
}

TEST(ModelsTest, PredictLossAtZero) {
  std::mt19937_64 rng(1);
  std::vector<Instance> data = testing::RandomInstances(20, 50, 5, false, &rng);
  std::vector<double> theta(50, 0.0);
  EXPECT_DOUBLE_EQ(PredictLoss(Kind(ModelType::kLogistic, 1.0), theta, data),
                   std::log(2.0));
  EXPECT_DOUBLE_EQ(PredictLoss(Kind(ModelType::kSvm, 1.0), theta, data), 1.0);
}

TEST(ModelsTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (ModelType type : {ModelType::kLinear, ModelType::kLogistic}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Instance> batch = testing::RandomInstances(
          100, 400, 8, type == ModelType::kLinear, &rng);
      std::vector<double> theta(400);
      for (double& t : theta) t = normal(rng);
      testing::FiniteDifferenceReport rep = testing::CheckAgainstFiniteDifferences(
          Kind(type, 0.1), theta, batch, 50, 1e-6, &rng);
      EXPECT_EQ(rep.coordinates_checked, 50u);
      EXPECT_LE(rep.max_relative_error, 1e-5) << ModelTypeName(type);
    }
  }
}

TEST(ModelsTest, SvmMatchesFiniteDifferencesAwayFromHinge) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::vector<double> theta(400);
  for (double& t : theta) t = normal(rng);
  std::vector<Instance> batch;
  for (const Instance& inst : testing::RandomInstances(300, 400, 8, false, &rng)) {
    if (std::fabs(inst.label * Margin(theta, inst) - 1.0) > 1e-3) {
      batch.push_back(inst);
    }
  }
  testing::FiniteDifferenceReport rep = testing::CheckAgainstFiniteDifferences(
      Kind(ModelType::kSvm, 0.1), theta, batch, 50, 1e-7, &rng);
  EXPECT_LE(rep.max_relative_error, 1e-5);
}

TEST(ModelsTest, EveryGradientKeyIsTouchedByTheBatch) {
  std::mt19937_64 rng(7);
  std::vector<Instance> batch = testing::RandomInstances(30, 1000, 4, false, &rng);
  std::vector<double> theta(1000, 0.1);
  BatchResult r = BatchGradient(Kind(ModelType::kLogistic, 0.1), theta, batch);
  for (const GradientEntry& e : r.gradient.entries()) {
    bool touched = false;
    for (const Instance& inst : batch) {
      for (const Feature& f : inst.features) touched |= f.key == e.key;
    }
    EXPECT_TRUE(touched) << e.key;
  }
}

TEST(ModelsTest, LogisticLossIsStableForLargeMargins) {
  EXPECT_NEAR(InstanceLoss(ModelType::kLogistic, 1000.0, 1.0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(InstanceLoss(ModelType::kLogistic, -1000.0, 1.0), 1000.0);
}

TEST(ModelsTest, ContractErrors) {
  std::vector<double> theta(2, 0.0);
  std::vector<Instance> empty;
  EXPECT_THROW(BatchGradient(ModelKind{}, theta, empty), EmptyInput);
  std::vector<Instance> outside = {{{{5, 1.0}}, 1.0}};
  EXPECT_THROW(BatchGradient(ModelKind{}, theta, outside), ContractViolation);
  EXPECT_THROW(ParseModelType("mlp"), ConfigError);
  EXPECT_EQ(ParseModelType("logistic"), ModelType::kLogistic);
}

}  // namespace
}  // namespace fastsgd
