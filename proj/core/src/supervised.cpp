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

// Supervised baseline and policy evaluation.

#include <cmath>
#include <stdexcept>

#include "pdl/trainers.hpp"

namespace pdl {

SupervisedLearner make_supervised_learner(const DiscreteEnvironment& env,
                                          const StochasticLearnerOptions& options) {
  if (options.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  std::vector<int> sizes{env.feature_size()};
  sizes.insert(sizes.end(), options.hidden_layers.begin(), options.hidden_layers.end());
  sizes.push_back(env.num_groups() * env.group_size());
  // Same seed stream as the stochastic learner's policy, so both start alike.
  return SupervisedLearner{
      Mlp::init({sizes, HiddenActivation::Tanh, OutputActivation::GroupedSoftmax(env.group_size())},
                derive_seed(options.seed, 100)),
      options.lr, options.batch_size, 0};
}

double cross_entropy(const Eigen::VectorXd& probs, const Association& labels, int group_size) {
  double loss = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    loss -= std::log(probs[static_cast<Eigen::Index>(k) * group_size + labels[k]]);
  }
  return loss;
}

StepMetrics supervised_step(SupervisedLearner& learner, const DiscreteEnvironment& env,
                            const DiscreteOracle& oracle, StepRng& rng) {
  const int g = env.group_size();
  const double lr = learner.lr.at(learner.t);
  MlpGradients grad = MlpGradients::zeros_like(learner.policy.spec());
  StepMetrics metrics;
  int violations = 0;

  for (int i = 0; i < learner.batch_size; ++i) {
    const EnvStatus status = env.sample_status(rng.status);
    const Association label = oracle(status);
    if (!env.observe(status, label).feasible()) {
      throw std::runtime_error("supervised_step: oracle returned an infeasible label");
    }
    const ForwardTrace trace = learner.policy.forward(env.features(status));
    const Eigen::VectorXd& probs = trace.output();

    // d(-log pi_label)/dpi = -1/pi at the label entries.
    Eigen::VectorXd output_grad = Eigen::VectorXd::Zero(probs.size());
    for (std::size_t k = 0; k < label.size(); ++k) {
      const Eigen::Index idx = static_cast<Eigen::Index>(k) * g + label[k];
      output_grad[idx] = -1.0 / probs[idx];
    }
    grad += learner.policy.backward_params(trace, output_grad);
    metrics.loss += cross_entropy(probs, label, g);

    // Training-time behaviour of the current policy, for reporting only.
    const Observation obs = env.observe(status, sample_association(probs, g, rng.action));
    metrics.objective += obs.objective_value;
    metrics.lagrangian += obs.objective_value / env.objective_scale();
    violations += obs.feasible() ? 0 : 1;
  }

  const double inv = 1.0 / learner.batch_size;
  grad *= inv;
  learner.policy.sgd_step(grad, lr, Direction::Descent);
  if (learner.policy.max_abs_parameter() > kMaxParameterMagnitude) {
    throw DivergenceError("supervised policy parameters diverged");
  }
  ++learner.t;

  metrics.objective *= inv;
  metrics.lagrangian *= inv;
  metrics.loss *= inv;
  metrics.violation_fraction = violations * inv;
  return metrics;
}

DiscretePolicy network_policy(const Mlp& policy, const DiscreteEnvironment& env, EvalMode mode) {
  const int g = env.group_size();
  return [&policy, &env, mode, g](const EnvStatus& status, Rng& rng) {
    const Eigen::VectorXd probs = policy.predict(env.features(status));
    return mode == EvalMode::Sample ? sample_association(probs, g, rng)
                                    : argmax_association(probs, g);
  };
}

PolicyEvaluation evaluate_policy(const DiscretePolicy& policy, const DiscreteEnvironment& env,
                                 std::span<const EnvStatus> statuses, Rng& action_rng) {
  if (statuses.empty()) throw std::invalid_argument("evaluate_policy: need at least one status");
  PolicyEvaluation eval;
  std::size_t violations = 0;
  for (const auto& status : statuses) {
    const Observation obs = env.observe(status, policy(status, action_rng));
    eval.avg_objective += obs.objective_value;
    violations += obs.feasible() ? 0 : 1;
  }
  const double n = static_cast<double>(statuses.size());
  eval.avg_objective /= n;
  eval.violation_probability = static_cast<double>(violations) / n;
  return eval;
}

PolicyEvaluation evaluate_policy(const Mlp& policy, const DiscreteEnvironment& env, int n_samples,
                                 EvalMode mode, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("evaluate_policy: n_samples must be >= 1");
  std::vector<EnvStatus> statuses;
  statuses.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) statuses.push_back(env.sample_status(rng));
  return evaluate_policy(network_policy(policy, env, mode), env, statuses, rng);
}

ContinuousEvaluation evaluate_continuous_policy(
    const std::function<Eigen::VectorXd(const EnvStatus&)>& policy,
    const ContinuousEnvironment& env, std::span<const EnvStatus> statuses) {
  if (statuses.empty()) throw std::invalid_argument("evaluate_continuous_policy: no statuses");
  ContinuousEvaluation eval;
  eval.avg_constraint_terms = Eigen::VectorXd::Zero(env.num_avg_constraints());
  std::size_t violations = 0;
  for (const auto& status : statuses) {
    const Observation obs = env.observe(status, policy(status));
    eval.avg_objective += obs.objective_value;
    eval.avg_constraint_terms += obs.avg_constraint_terms;
    violations += obs.feasible() ? 0 : 1;
  }
  const double n = static_cast<double>(statuses.size());
  eval.avg_objective /= n;
  eval.avg_constraint_terms /= n;
  eval.violation_probability = static_cast<double>(violations) / n;
  return eval;
}

}  // namespace pdl
