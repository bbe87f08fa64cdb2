// Copyright 2026 The pdlearn Authors
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

// Shared primal-dual update for the deterministic learners. Only depends on
// the observation interface.

#pragma once

#include <functional>
#include <vector>

#include "pdl/trainers.hpp"

namespace pdl::detail {

struct DetBatchItem {
  EnvStatus status;
  Eigen::VectorXd features;
  ForwardTrace trace;
  Eigen::VectorXd action;    // clamped policy output
  Eigen::VectorXd executed;  // action actually applied (with exploration)
  Observation observation;
};

Eigen::VectorXd clamp_action(const Eigen::VectorXd& raw, const ContinuousEnvironment& env);

// Draws the batch, runs the policy and observes the environment.
// `noise_sigma` 0 executes the policy action itself.
std::vector<DetBatchItem> collect_det_batch(const DeterministicLearner& learner,
                                            const ContinuousEnvironment& env, StepRng& rng,
                                            double noise_sigma);

using ActionGradientFn = std::function<CriticGradients(const DetBatchItem&)>;

// Policy ascent along d(J/scale - mu.c)/dx chained through the policy
// network, then projected multiplier ascent mu <- max(0, mu + lr mean(c)).
StepMetrics apply_det_update(DeterministicLearner& learner, const ContinuousEnvironment& env,
                             const std::vector<DetBatchItem>& batch,
                             const ActionGradientFn& action_gradients, double lr);

void check_det_learner(const DeterministicLearner& learner, const ContinuousEnvironment& env);

}  // namespace pdl::detail
