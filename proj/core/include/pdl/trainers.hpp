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

// Primal-dual learners for constrained functional optimization.
//
// All learners maximize the Lagrangian
//
//   L(h) = J(x, h) / scale - lambda(h) . g(x, h) - mu . c(x, h)
//
// over the policy parameters and minimize it over the multipliers, one batch
// of sampled statuses per step, with learning rate base / (1 + decay t).
//
//   stochastic_step       discrete actions; policy emits per-group softmax
//                         distributions, score-function gradient with a
//                         value-network baseline, multiplier network for the
//                         instantaneous constraints.
//   modelbased_det_step   continuous actions; exact dJ/dx and dc/dx from the
//                         environment's analytic model.
//   modelfree_det_step    continuous actions; the same update with dJ/dx and
//                         dc/dx taken from value networks fitted to observed
//                         values, plus decaying Gaussian exploration noise.
//   supervised_step       cross-entropy against an oracle's labels.
//
// The model-free paths only see the observation interfaces in
// environment.hpp.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pdl/environment.hpp"
#include "pdl/neuralnet.hpp"
#include "pdl/random.hpp"

namespace pdl {

class AnalyticModel;

// Separate streams for status draws and for action sampling / exploration
// noise.
struct StepRng {
  Rng status;
  Rng action;
};

struct StepMetrics {
  double objective = 0.0;           // batch mean J, reporting units
  double violation_fraction = 0.0;  // share of the batch with some g_i > 0
  double lagrangian = 0.0;          // batch mean of the normalized Lagrangian
  double multiplier_norm = 0.0;     // |batch mean lambda(h)| or |mu|
  double loss = 0.0;                // supervised cross-entropy, else 0
  Eigen::VectorXd avg_constraint_terms;  // batch mean c_j
};

struct LagrangianSample {
  double objective = 0.0;                 // normalized J
  Eigen::VectorXd instant_constraints;    // g
  Eigen::VectorXd multipliers;            // lambda(h)
  Eigen::VectorXd avg_constraint_terms;   // c
  Eigen::VectorXd avg_multipliers;        // mu

  double lagrangian() const;
};

// Divergence guard shared by all learners.
inline constexpr double kMaxParameterMagnitude = 1e6;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Stochastic policy (discrete actions)

enum class BaselineKind {
  Lagrangian,  // v_J(h) - lambda(h) . v_g(h)
  Objective,   // v_J(h) only
};

struct StochasticLearnerOptions {
  std::vector<int> hidden_layers = {20, 20};
  LrSchedule lr;
  int batch_size = 16;
  BaselineKind baseline = BaselineKind::Lagrangian;
  std::uint64_t seed = 0;
};

struct StochasticLearner {
  Mlp policy;      // features -> K groups of B probabilities
  Mlp multiplier;  // features -> B non-negative multipliers
  Mlp value;       // features -> (v_J, v_g - floor), non-negative
  LrSchedule lr;
  int batch_size = 16;
  BaselineKind baseline = BaselineKind::Lagrangian;
  long t = 0;
};

StochasticLearner make_stochastic_learner(const DiscreteEnvironment& env,
                                          const StochasticLearnerOptions& options);

Association sample_association(const Eigen::VectorXd& probs, int group_size, Rng& rng);
Association argmax_association(const Eigen::VectorXd& probs, int group_size);

// advantage * grad_theta log pi(action | h), with pi read from `trace`.
MlpGradients score_function_gradient(const Mlp& policy, const ForwardTrace& trace,
                                     const Association& action, double advantage);

StepMetrics stochastic_step(StochasticLearner& learner, const DiscreteEnvironment& env,
                            StepRng& rng);

// ---------------------------------------------------------------------------
// Deterministic policy (continuous actions)

struct ExplorationSchedule {
  double sigma0 = 0.0;
  double decay = 1e-3;

  // sigma0 / (1 + decay t)
  double at(long t) const;
};

struct DeterministicLearnerOptions {
  std::vector<int> hidden_layers = {20, 20};
  LrSchedule lr;
  int batch_size = 16;
  // Initial noise level as a fraction of the action range.
  double exploration_fraction = 0.1;
  double exploration_decay = 1e-3;
  std::uint64_t seed = 0;
};

struct DeterministicLearner {
  Mlp policy;                   // features -> action, ReLU output
  std::vector<Mlp> value_nets;  // [0]: J/scale, [1 + j]: c_j; input (x, features)
  Eigen::VectorXd avg_multipliers;
  LrSchedule lr;
  ExplorationSchedule exploration;
  int batch_size = 16;
  long t = 0;
};

// The policy starts at env.initial_action() for every status: hidden layers
// are randomly initialized, the output layer has zero weights and the initial
// action as bias.
DeterministicLearner make_deterministic_learner(const ContinuousEnvironment& env,
                                                const DeterministicLearnerOptions& options);

struct CriticSample {
  Eigen::VectorXd features;
  Eigen::VectorXd action;
  double objective = 0.0;  // normalized J
  Eigen::VectorXd avg_constraint_terms;
};

struct CriticGradients {
  Eigen::VectorXd objective;        // d(J/scale)/dx
  Eigen::MatrixXd avg_constraints;  // row j: dc_j/dx
};

// Source of action-gradients for the model-free deterministic update.
class Critic {
 public:
  virtual ~Critic() = default;
  virtual void fit(std::span<const CriticSample> batch, double lr) = 0;
  virtual CriticGradients gradients(const EnvStatus& status, const Eigen::VectorXd& features,
                                    const Eigen::VectorXd& action) const = 0;
};

// Value networks regressed onto observed values (L2 loss, SGD).
class ValueNetCritic : public Critic {
 public:
  explicit ValueNetCritic(std::vector<Mlp>& nets) : nets_(nets) {}

  void fit(std::span<const CriticSample> batch, double lr) override;
  CriticGradients gradients(const EnvStatus& status, const Eigen::VectorXd& features,
                            const Eigen::VectorXd& action) const override;

 private:
  std::vector<Mlp>& nets_;
};

StepMetrics modelfree_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                               StepRng& rng);
StepMetrics modelfree_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                               StepRng& rng, Critic& critic);

// Throws std::invalid_argument when `env` does not expose an AnalyticModel.
StepMetrics modelbased_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                                StepRng& rng);
StepMetrics modelbased_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                                const AnalyticModel& model, StepRng& rng);

// Clamped policy output.
Eigen::VectorXd policy_action(const Mlp& policy, const ContinuousEnvironment& env,
                              const EnvStatus& status);

// ---------------------------------------------------------------------------
// Supervised baseline

struct SupervisedLearner {
  Mlp policy;
  LrSchedule lr;
  int batch_size = 16;
  long t = 0;
};

SupervisedLearner make_supervised_learner(const DiscreteEnvironment& env,
                                          const StochasticLearnerOptions& options);

using DiscreteOracle = std::function<Association(const EnvStatus&)>;

// Sum over groups of -log pi(label).
double cross_entropy(const Eigen::VectorXd& probs, const Association& labels, int group_size);

// Throws std::runtime_error if the oracle returns an infeasible label.
StepMetrics supervised_step(SupervisedLearner& learner, const DiscreteEnvironment& env,
                            const DiscreteOracle& oracle, StepRng& rng);

// ---------------------------------------------------------------------------
// Evaluation

enum class EvalMode { Sample, Argmax };

using DiscretePolicy = std::function<Association(const EnvStatus&, Rng&)>;

DiscretePolicy network_policy(const Mlp& policy, const DiscreteEnvironment& env, EvalMode mode);

struct PolicyEvaluation {
  double avg_objective = 0.0;
  double violation_probability = 0.0;
};

PolicyEvaluation evaluate_policy(const DiscretePolicy& policy, const DiscreteEnvironment& env,
                                 std::span<const EnvStatus> statuses, Rng& action_rng);
// Draws n statuses from `rng`, then samples actions from the same stream.
PolicyEvaluation evaluate_policy(const Mlp& policy, const DiscreteEnvironment& env, int n_samples,
                                 EvalMode mode, Rng& rng);

struct ContinuousEvaluation {
  double avg_objective = 0.0;
  double violation_probability = 0.0;
  Eigen::VectorXd avg_constraint_terms;
};

ContinuousEvaluation evaluate_continuous_policy(
    const std::function<Eigen::VectorXd(const EnvStatus&)>& policy,
    const ContinuousEnvironment& env, std::span<const EnvStatus> statuses);

}  // namespace pdl
