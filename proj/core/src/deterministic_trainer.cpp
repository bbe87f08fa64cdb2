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

// Model-free deterministic learner and the update it shares with the
// model-based one. Nothing here may include pdl/model.hpp.

#include <cmath>
#include <stdexcept>

#include "det_update.hpp"

namespace pdl {

double ExplorationSchedule::at(long t) const {
  return sigma0 / (1.0 + decay * static_cast<double>(t));
}

DeterministicLearner make_deterministic_learner(const ContinuousEnvironment& env,
                                                const DeterministicLearnerOptions& options) {
  if (options.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (options.exploration_fraction < 0.0 || options.exploration_decay < 0.0) {
    throw std::invalid_argument("exploration schedule must be non-negative");
  }
  const int in = env.feature_size();
  const int act = env.action_size();

  auto sizes = [&](int input, int out) {
    std::vector<int> s{input};
    s.insert(s.end(), options.hidden_layers.begin(), options.hidden_layers.end());
    s.push_back(out);
    return s;
  };

  Mlp policy = Mlp::init({sizes(in, act), HiddenActivation::Tanh, OutputActivation::ReLU()},
                         derive_seed(options.seed, 200));
  auto& out_layer = policy.mutable_layers().back();
  out_layer.weight.setZero();
  out_layer.bias = env.initial_action();

  std::vector<Mlp> value_nets;
  const MlpSpec value_spec{sizes(act + in, 1), HiddenActivation::Tanh,
                           OutputActivation::Identity()};
  for (int j = 0; j <= env.num_avg_constraints(); ++j) {
    value_nets.push_back(Mlp::init(value_spec, derive_seed(options.seed, 201 + j)));
  }

  const double range = (env.action_upper() - env.action_lower()).maxCoeff();
  return DeterministicLearner{std::move(policy),
                              std::move(value_nets),
                              Eigen::VectorXd::Zero(env.num_avg_constraints()),
                              options.lr,
                              ExplorationSchedule{options.exploration_fraction * range,
                                                  options.exploration_decay},
                              options.batch_size,
                              0};
}

Eigen::VectorXd policy_action(const Mlp& policy, const ContinuousEnvironment& env,
                              const EnvStatus& status) {
  return detail::clamp_action(policy.predict(env.features(status)), env);
}

namespace detail {

Eigen::VectorXd clamp_action(const Eigen::VectorXd& raw, const ContinuousEnvironment& env) {
  return raw.cwiseMax(env.action_lower()).cwiseMin(env.action_upper());
}

void check_det_learner(const DeterministicLearner& learner, const ContinuousEnvironment& env) {
  if (learner.policy.spec().input_size() != env.feature_size() ||
      learner.policy.spec().output_size() != env.action_size() ||
      learner.avg_multipliers.size() != env.num_avg_constraints()) {
    throw std::invalid_argument("deterministic learner does not match environment");
  }
}

std::vector<DetBatchItem> collect_det_batch(const DeterministicLearner& learner,
                                            const ContinuousEnvironment& env, StepRng& rng,
                                            double noise_sigma) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DetBatchItem> batch;
  batch.reserve(learner.batch_size);
  for (int i = 0; i < learner.batch_size; ++i) {
    DetBatchItem item;
    item.status = env.sample_status(rng.status);
    item.features = env.features(item.status);
    item.trace = learner.policy.forward(item.features);
    item.action = clamp_action(item.trace.output(), env);
    item.executed = item.action;
    if (noise_sigma > 0.0) {
      for (Eigen::Index d = 0; d < item.executed.size(); ++d) {
        item.executed[d] += noise_sigma * normal(rng.action);
      }
      item.executed = clamp_action(item.executed, env);
    }
    item.observation = env.observe(item.status, item.executed);
    batch.push_back(std::move(item));
  }
  return batch;
}

StepMetrics apply_det_update(DeterministicLearner& learner, const ContinuousEnvironment& env,
                             const std::vector<DetBatchItem>& batch,
                             const ActionGradientFn& action_gradients, double lr) {
  const double scale = env.objective_scale();
  const Eigen::VectorXd upper = env.action_upper();
  const Eigen::VectorXd& mu = learner.avg_multipliers;

  MlpGradients policy_grad = MlpGradients::zeros_like(learner.policy.spec());
  Eigen::VectorXd mean_c = Eigen::VectorXd::Zero(mu.size());
  StepMetrics metrics;
  int violations = 0;

  for (const auto& item : batch) {
    const CriticGradients grads = action_gradients(item);
    Eigen::VectorXd dl_dx = grads.objective;
    if (mu.size() > 0) dl_dx -= grads.avg_constraints.transpose() * mu;
    // Past the upper clamp the action cannot move further up.
    const Eigen::VectorXd& raw = item.trace.output();
    for (Eigen::Index d = 0; d < dl_dx.size(); ++d) {
      if (raw[d] > upper[d] && dl_dx[d] > 0.0) dl_dx[d] = 0.0;
    }
    policy_grad += learner.policy.backward_params(item.trace, dl_dx);

    const Observation& obs = item.observation;
    LagrangianSample sample{obs.objective_value / scale, Eigen::VectorXd(), Eigen::VectorXd(),
                            obs.avg_constraint_terms, mu};
    const double lagrangian = sample.lagrangian();
    if (!std::isfinite(lagrangian)) {
      throw DivergenceError("deterministic step: non-finite Lagrangian at t=" +
                            std::to_string(learner.t));
    }
    mean_c += obs.avg_constraint_terms;
    metrics.objective += obs.objective_value;
    metrics.lagrangian += lagrangian;
    violations += obs.feasible() ? 0 : 1;
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  policy_grad *= inv;
  mean_c *= inv;
  learner.policy.sgd_step(policy_grad, lr, Direction::Ascent);
  learner.avg_multipliers = (mu + lr * mean_c).cwiseMax(0.0);

  if (!learner.policy.all_finite() ||
      learner.policy.max_abs_parameter() > kMaxParameterMagnitude ||
      !learner.avg_multipliers.allFinite()) {
    throw DivergenceError("deterministic step: parameters diverged at t=" +
                          std::to_string(learner.t));
  }
  ++learner.t;

  metrics.objective *= inv;
  metrics.lagrangian *= inv;
  metrics.violation_fraction = violations * inv;
  metrics.multiplier_norm = learner.avg_multipliers.norm();
  metrics.avg_constraint_terms = mean_c;
  return metrics;
}

}  // namespace detail

void ValueNetCritic::fit(std::span<const CriticSample> batch, double lr) {
  if (batch.empty()) return;
  std::vector<MlpGradients> grads;
  for (const auto& net : nets_) grads.push_back(MlpGradients::zeros_like(net.spec()));
  for (const auto& s : batch) {
    Eigen::VectorXd input(s.action.size() + s.features.size());
    input << s.action, s.features;
    for (std::size_t n = 0; n < nets_.size(); ++n) {
      const double target = n == 0 ? s.objective : s.avg_constraint_terms[n - 1];
      const ForwardTrace trace = nets_[n].forward(input);
      grads[n] += nets_[n].backward_params(
          trace, Eigen::VectorXd::Constant(1, trace.output()[0] - target));
    }
  }
  for (std::size_t n = 0; n < nets_.size(); ++n) {
    grads[n] *= 1.0 / static_cast<double>(batch.size());
    nets_[n].sgd_step(grads[n], lr, Direction::Descent);
  }
}

CriticGradients ValueNetCritic::gradients(const EnvStatus& /*status*/,
                                          const Eigen::VectorXd& features,
                                          const Eigen::VectorXd& action) const {
  const Eigen::Index act = action.size();
  Eigen::VectorXd input(act + features.size());
  input << action, features;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);

  CriticGradients out;
  out.avg_constraints.resize(static_cast<Eigen::Index>(nets_.size()) - 1, act);
  for (std::size_t n = 0; n < nets_.size(); ++n) {
    const ForwardTrace trace = nets_[n].forward(input);
    const Eigen::VectorXd d_input = nets_[n].backward_input(trace, one);
    if (n == 0) {
      out.objective = d_input.head(act);
    } else {
      out.avg_constraints.row(static_cast<Eigen::Index>(n) - 1) = d_input.head(act).transpose();
    }
  }
  return out;
}

StepMetrics modelfree_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                               StepRng& rng) {
  ValueNetCritic critic(learner.value_nets);
  return modelfree_det_step(learner, env, rng, critic);
}

StepMetrics modelfree_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                               StepRng& rng, Critic& critic) {
  detail::check_det_learner(learner, env);
  const double lr = learner.lr.at(learner.t);
  const auto batch =
      detail::collect_det_batch(learner, env, rng, learner.exploration.at(learner.t));

  const double scale = env.objective_scale();
  std::vector<CriticSample> samples;
  samples.reserve(batch.size());
  for (const auto& item : batch) {
    samples.push_back({item.features, item.executed, item.observation.objective_value / scale,
                       item.observation.avg_constraint_terms});
  }
  critic.fit(samples, lr);

  return detail::apply_det_update(
      learner, env, batch,
      [&critic](const detail::DetBatchItem& item) {
        return critic.gradients(item.status, item.features, item.action);
      },
      lr);
}

}  // namespace pdl
