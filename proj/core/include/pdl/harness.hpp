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

// Experiment orchestration.
//
// run_experiment trains one learner for `iterations` steps. After every step
// the current policy is evaluated on one freshly drawn status, giving a
// per-iteration rate and violation indicator; every `eval_every` steps a
// MetricRecord stores their trailing mean over `moving_average_window`
// iterations. At the end the policy is evaluated on `eval_samples` fresh
// statuses next to the oracle.
//
// Random streams (all derived from `seed`):
//   1 training statuses     2 training actions / exploration noise
//   3 curve statuses        4 curve action sampling
//   5 final-eval statuses   6 final-eval action sampling
// Network initialization uses derive_seed(seed, 100+). Evaluation draws never
// touch the training streams.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdl/neuralnet.hpp"
#include "pdl/power_control.hpp"
#include "pdl/trainers.hpp"
#include "pdl/user_assoc.hpp"

namespace pdl {

enum class Problem { UserAssoc, PowerControl };
enum class Algorithm { ModelBased, ModelFreeDet, ModelFreeStochastic, Supervised, Oracle };

struct ExperimentConfig {
  Problem problem = Problem::UserAssoc;
  Algorithm algorithm = Algorithm::ModelFreeStochastic;
  UserAssocConfig user_assoc;
  PowerControlConfig power_control;

  std::vector<int> hidden_layers = {20, 20};
  LrSchedule lr;
  int batch_size = 16;
  BaselineKind baseline = BaselineKind::Lagrangian;
  double exploration_fraction = 0.1;
  double exploration_decay = 1e-3;

  long iterations = 200000;
  std::uint64_t seed = 0;
  int eval_every = 100;
  int eval_samples = 10000;
  int moving_average_window = 500;
  EvalMode eval_mode = EvalMode::Sample;

  // Throws std::invalid_argument naming the offending setting.
  void validate() const;
};

struct MetricRecord {
  long iteration = 0;
  double avg_rate = 0.0;        // trailing mean, bit/s (bit/s/Hz for power control)
  double violation_prob = 0.0;  // trailing mean of the violation indicator
  double lagrangian = 0.0;      // trailing mean of the training-batch Lagrangian
  double multiplier_norm = 0.0; // at this iteration

  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

struct RunSummary {
  long iterations_completed = 0;
  double final_avg_rate = 0.0;
  double final_violation_prob = 0.0;

  // Fresh-status evaluation after training.
  double eval_rate = 0.0;  // in the configured eval mode
  double eval_violation_prob = 0.0;
  double eval_rate_argmax = 0.0;
  double eval_violation_prob_argmax = 0.0;
  double oracle_rate = 0.0;  // oracle on the same statuses

  // Power control only: policy vs water-filling solved on the eval gains.
  std::optional<double> waterfilling_deviation;  // mean|p - p*| / mean p*
  std::optional<double> eval_avg_power;
};

struct ExperimentResult {
  std::vector<MetricRecord> records;
  RunSummary summary;
  bool failed = false;
  std::string failure_message;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Trailing mean over min(window, i + 1) values. Throws on an empty series or
// window < 1.
std::vector<double> moving_average(std::span<const double> series, int window = 500);

struct OracleComparison {
  double rate_ratio = 0.0;     // final avg_rate / oracle avg_rate
  double violation_gap = 0.0;  // final violation_prob - oracle violation_prob
};

// Throws std::invalid_argument when the oracle rate is zero.
OracleComparison compare_to_oracle(const ExperimentResult& result,
                                   const ExperimentResult& oracle_result);

std::string to_string(Problem problem);
std::string to_string(Algorithm algorithm);

}  // namespace pdl
