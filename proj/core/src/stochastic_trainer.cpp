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

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pdl/trainers.hpp"

namespace pdl {

double LagrangianSample::lagrangian() const {
  double l = objective;
  if (instant_constraints.size() > 0) l -= multipliers.dot(instant_constraints);
  if (avg_constraint_terms.size() > 0) l -= avg_multipliers.dot(avg_constraint_terms);
  return l;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng rng = make_stream(seed, stream);
  return rng();
}

StochasticLearner make_stochastic_learner(const DiscreteEnvironment& env,
                                          const StochasticLearnerOptions& options) {
  if (options.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  const int in = env.feature_size();
  const int groups = env.num_groups();
  const int choices = env.group_size();
  const int constraints = env.num_instant_constraints();

  auto sizes = [&](int out) {
    std::vector<int> s{in};
    s.insert(s.end(), options.hidden_layers.begin(), options.hidden_layers.end());
    s.push_back(out);
    return s;
  };
  MlpSpec policy{sizes(groups * choices), HiddenActivation::Tanh,
                 OutputActivation::GroupedSoftmax(choices)};
  MlpSpec multiplier{sizes(constraints), HiddenActivation::Tanh, OutputActivation::ReLU()};
  MlpSpec value{sizes(1 + constraints), HiddenActivation::Tanh, OutputActivation::ReLU()};

  return StochasticLearner{Mlp::init(policy, derive_seed(options.seed, 100)),
                           Mlp::init(multiplier, derive_seed(options.seed, 101)),
                           Mlp::init(value, derive_seed(options.seed, 102)),
                           options.lr,
                           options.batch_size,
                           options.baseline,
                           0};
}

Association sample_association(const Eigen::VectorXd& probs, int group_size, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Association a(static_cast<std::size_t>(probs.size() / group_size));
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double u = unit(rng);
    double acc = 0.0;
    int choice = group_size - 1;
    for (int b = 0; b < group_size; ++b) {
      acc += probs[static_cast<Eigen::Index>(k) * group_size + b];
      if (u < acc) {
        choice = b;
        break;
      }
    }
    a[k] = choice;
  }
  return a;
}

Association argmax_association(const Eigen::VectorXd& probs, int group_size) {
  Association a(static_cast<std::size_t>(probs.size() / group_size));
  for (std::size_t k = 0; k < a.size(); ++k) {
    Eigen::Index best = 0;
    probs.segment(static_cast<Eigen::Index>(k) * group_size, group_size).maxCoeff(&best);
    a[k] = static_cast<int>(best);
  }
  return a;
}

MlpGradients score_function_gradient(const Mlp& policy, const ForwardTrace& trace,
                                     const Association& action, double advantage) {
  const int g = policy.spec().output_activation.group_size();
  const Eigen::VectorXd& probs = trace.output();
  // d/dpi of sum_k log pi_k(x_k) is 1/pi at the chosen entries.
  Eigen::VectorXd output_grad = Eigen::VectorXd::Zero(probs.size());
  for (std::size_t k = 0; k < action.size(); ++k) {
    const Eigen::Index i = static_cast<Eigen::Index>(k) * g + action[k];
    output_grad[i] = advantage / probs[i];
  }
  return policy.backward_params(trace, output_grad);
}

namespace {

void guard_parameters(const Mlp& net, const char* name) {
  if (!net.all_finite() || net.max_abs_parameter() > kMaxParameterMagnitude) {
    throw DivergenceError(std::string(name) + " parameters diverged (|theta| > 1e6 or non-finite)");
  }
}

}  // namespace

StepMetrics stochastic_step(StochasticLearner& learner, const DiscreteEnvironment& env,
                            StepRng& rng) {
  const int groups = env.num_groups();
  const int choices = env.group_size();
  const int constraints = env.num_instant_constraints();
  if (learner.policy.spec().input_size() != env.feature_size() ||
      learner.policy.spec().output_size() != groups * choices ||
      learner.multiplier.spec().output_size() != constraints ||
      learner.value.spec().output_size() != 1 + constraints) {
    throw std::invalid_argument("stochastic_step: learner does not match environment");
  }

  const double lr = learner.lr.at(learner.t);
  const double scale = env.objective_scale();
  const Eigen::VectorXd floor = env.constraint_floor();

  MlpGradients policy_grad = MlpGradients::zeros_like(learner.policy.spec());
  MlpGradients multiplier_grad = MlpGradients::zeros_like(learner.multiplier.spec());
  MlpGradients value_grad = MlpGradients::zeros_like(learner.value.spec());

  StepMetrics metrics;
  Eigen::VectorXd multiplier_sum = Eigen::VectorXd::Zero(constraints);
  int violations = 0;

  for (int i = 0; i < learner.batch_size; ++i) {
    const EnvStatus status = env.sample_status(rng.status);
    const Eigen::VectorXd features = env.features(status);

    const ForwardTrace policy_trace = learner.policy.forward(features);
    const Association action = sample_association(policy_trace.output(), choices, rng.action);
    const Observation obs = env.observe(status, action);

    const ForwardTrace multiplier_trace = learner.multiplier.forward(features);
    const ForwardTrace value_trace = learner.value.forward(features);

    LagrangianSample sample{obs.objective_value / scale, obs.instant_constraints,
                            multiplier_trace.output(), Eigen::VectorXd(), Eigen::VectorXd()};
    const double lagrangian = sample.lagrangian();
    if (!std::isfinite(lagrangian)) {
      std::ostringstream msg;
      msg << "stochastic_step: non-finite Lagrangian at t=" << learner.t << " (J=" << sample.objective
          << ", lambda=" << sample.multipliers.transpose() << ", g=" << obs.instant_constraints.transpose()
          << ")";
      throw DivergenceError(msg.str());
    }

    // Baseline: action-averaged Lagrangian from the value network.
    const Eigen::VectorXd& v = value_trace.output();
    const Eigen::VectorXd value_g = v.tail(constraints) + floor;
    double baseline = v[0];
    if (learner.baseline == BaselineKind::Lagrangian) baseline -= sample.multipliers.dot(value_g);

    Eigen::VectorXd target(1 + constraints);
    target << sample.objective, obs.instant_constraints - floor;
    value_grad += learner.value.backward_params(value_trace, v - target);
    policy_grad += score_function_gradient(learner.policy, policy_trace, action,
                                           lagrangian - baseline);
    // dL/dlambda = -g: moving along +g * dlambda/dtheta descends L. The ReLU
    // output acts as the projection onto lambda >= 0, as in
    // mu <- max(0, mu + lr c): an inactive unit stays put while its
    // constraint is slack but is pushed back up once it is violated.
    const Eigen::VectorXd& z = multiplier_trace.pre_activations.back();
    const Eigen::VectorXd& g = obs.instant_constraints;
    const Eigen::VectorXd delta =
        ((z.array() > 0.0) || (g.array() > 0.0)).select(g, Eigen::VectorXd::Zero(constraints));
    multiplier_grad += learner.multiplier.backward_params_preactivation(multiplier_trace, delta);

    metrics.objective += obs.objective_value;
    metrics.lagrangian += lagrangian;
    multiplier_sum += sample.multipliers;
    violations += obs.feasible() ? 0 : 1;
  }

  const double inv = 1.0 / learner.batch_size;
  policy_grad *= inv;
  multiplier_grad *= inv;
  value_grad *= inv;

  learner.value.sgd_step(value_grad, lr, Direction::Descent);
  learner.policy.sgd_step(policy_grad, lr, Direction::Ascent);
  learner.multiplier.sgd_step(multiplier_grad, lr, Direction::Ascent);
  guard_parameters(learner.policy, "policy network");
  guard_parameters(learner.multiplier, "multiplier network");
  guard_parameters(learner.value, "value network");
  ++learner.t;

  metrics.objective *= inv;
  metrics.lagrangian *= inv;
  metrics.multiplier_norm = (multiplier_sum * inv).norm();
  metrics.violation_fraction = violations * inv;
  return metrics;
}

}  // namespace pdl
