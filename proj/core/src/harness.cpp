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

#include "pdl/harness.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace pdl {

namespace {

enum Stream : std::uint64_t {
  kTrainStatus = 1,
  kTrainAction = 2,
  kCurveStatus = 3,
  kCurveAction = 4,
  kEvalStatus = 5,
  kEvalAction = 6,
};

struct CurvePoint {
  double rate = 0.0;
  bool violated = false;
};

// One algorithm bound to one environment.
class Runner {
 public:
  virtual ~Runner() = default;
  virtual StepMetrics train_step(StepRng& rng) = 0;
  virtual CurvePoint curve_point(Rng& status_rng, Rng& action_rng) = 0;
  virtual void final_eval(RunSummary& summary, const ExperimentConfig& config) = 0;
};

StochasticLearnerOptions stochastic_options(const ExperimentConfig& c) {
  return StochasticLearnerOptions{c.hidden_layers, c.lr, c.batch_size, c.baseline, c.seed};
}

DeterministicLearnerOptions deterministic_options(const ExperimentConfig& c) {
  return DeterministicLearnerOptions{c.hidden_layers,          c.lr, c.batch_size,
                                     c.exploration_fraction,  c.exploration_decay, c.seed};
}

std::vector<EnvStatus> draw_statuses(int n, const auto& env, Rng& rng) {
  std::vector<EnvStatus> statuses;
  statuses.reserve(n);
  for (int i = 0; i < n; ++i) statuses.push_back(env.sample_status(rng));
  return statuses;
}

class UserAssocRunner : public Runner {
 public:
  explicit UserAssocRunner(const ExperimentConfig& config) : env_(config.user_assoc) {}

  void final_eval(RunSummary& summary, const ExperimentConfig& config) override {
    Rng status_rng = make_stream(config.seed, kEvalStatus);
    const auto statuses = draw_statuses(config.eval_samples, env_, status_rng);

    Rng rng = make_stream(config.seed, kEvalAction);
    const auto main = evaluate_policy(policy(config.eval_mode), env_, statuses, rng);
    const auto argmax = evaluate_policy(policy(EvalMode::Argmax), env_, statuses, rng);
    const auto oracle = evaluate_policy(oracle_policy(), env_, statuses, rng);
    summary.eval_rate = main.avg_objective;
    summary.eval_violation_prob = main.violation_probability;
    summary.eval_rate_argmax = argmax.avg_objective;
    summary.eval_violation_prob_argmax = argmax.violation_probability;
    summary.oracle_rate = oracle.avg_objective;
  }

  CurvePoint curve_point(Rng& status_rng, Rng& action_rng) override {
    const EnvStatus status = env_.sample_status(status_rng);
    const Observation obs = env_.observe(status, curve_policy()(status, action_rng));
    return {obs.objective_value, !obs.feasible()};
  }

 protected:
  virtual DiscretePolicy policy(EvalMode mode) const = 0;
  virtual DiscretePolicy curve_policy() const = 0;

  DiscretePolicy oracle_policy() const {
    return [this](const EnvStatus& s, Rng&) { return env_.oracle(s).association; };
  }

  UserAssocEnv env_;
};

class StochasticRunner : public UserAssocRunner {
 public:
  explicit StochasticRunner(const ExperimentConfig& config)
      : UserAssocRunner(config),
        learner_(make_stochastic_learner(env_, stochastic_options(config))),
        mode_(config.eval_mode) {}

  StepMetrics train_step(StepRng& rng) override { return stochastic_step(learner_, env_, rng); }

 protected:
  DiscretePolicy policy(EvalMode mode) const override {
    return network_policy(learner_.policy, env_, mode);
  }
  DiscretePolicy curve_policy() const override { return policy(mode_); }

 private:
  StochasticLearner learner_;
  EvalMode mode_;
};

class SupervisedRunner : public UserAssocRunner {
 public:
  explicit SupervisedRunner(const ExperimentConfig& config)
      : UserAssocRunner(config),
        learner_(make_supervised_learner(env_, stochastic_options(config))),
        mode_(config.eval_mode) {}

  StepMetrics train_step(StepRng& rng) override {
    return supervised_step(
        learner_, env_, [this](const EnvStatus& s) { return env_.oracle(s).association; }, rng);
  }

 protected:
  DiscretePolicy policy(EvalMode mode) const override {
    return network_policy(learner_.policy, env_, mode);
  }
  DiscretePolicy curve_policy() const override { return policy(mode_); }

 private:
  SupervisedLearner learner_;
  EvalMode mode_;
};

class AssociationOracleRunner : public UserAssocRunner {
 public:
  using UserAssocRunner::UserAssocRunner;

  StepMetrics train_step(StepRng& rng) override {
    const EnvStatus status = env_.sample_status(rng.status);
    const auto best = env_.oracle(status);
    StepMetrics m;
    m.objective = best.rate;
    m.lagrangian = best.rate / env_.objective_scale();
    return m;
  }

 protected:
  DiscretePolicy policy(EvalMode) const override { return oracle_policy(); }
  DiscretePolicy curve_policy() const override { return oracle_policy(); }
};

class PowerControlRunner : public Runner {
 public:
  PowerControlRunner(const ExperimentConfig& config, Algorithm algorithm)
      : env_(config.power_control), algorithm_(algorithm) {
    if (algorithm_ == Algorithm::Oracle) {
      Rng rng = make_stream(config.seed, kEvalStatus + 100);
      reference_ = solve(draw_statuses(config.eval_samples, env_, rng));
    } else {
      learner_ = make_deterministic_learner(env_, deterministic_options(config));
    }
  }

  StepMetrics train_step(StepRng& rng) override {
    switch (algorithm_) {
      case Algorithm::ModelBased:
        return modelbased_det_step(*learner_, env_, rng);
      case Algorithm::ModelFreeDet:
        return modelfree_det_step(*learner_, env_, rng);
      default: {
        const EnvStatus status = env_.sample_status(rng.status);
        StepMetrics m;
        m.objective = env_.observe(status, action(status)).objective_value;
        m.lagrangian = m.objective / env_.objective_scale();
        return m;
      }
    }
  }

  CurvePoint curve_point(Rng& status_rng, Rng&) override {
    const EnvStatus status = env_.sample_status(status_rng);
    const Observation obs = env_.observe(status, action(status));
    return {obs.objective_value, !obs.feasible()};
  }

  void final_eval(RunSummary& summary, const ExperimentConfig& config) override {
    Rng status_rng = make_stream(config.seed, kEvalStatus);
    const auto statuses = draw_statuses(config.eval_samples, env_, status_rng);
    const WaterfillingSolution best = solve(statuses);
    auto oracle_action = [&](const EnvStatus& s) {
      return Eigen::VectorXd::Constant(1, std::min(best.power(s[0]), config.power_control.max_power));
    };
    auto learned = [this](const EnvStatus& s) { return action(s); };

    const auto eval = evaluate_continuous_policy(learned, env_, statuses);
    const auto oracle = evaluate_continuous_policy(oracle_action, env_, statuses);
    summary.eval_rate = summary.eval_rate_argmax = eval.avg_objective;
    summary.eval_violation_prob = summary.eval_violation_prob_argmax = eval.violation_probability;
    summary.oracle_rate = oracle.avg_objective;
    summary.eval_avg_power = eval.avg_constraint_terms[0] + config.power_control.avg_power_budget;

    double abs_dev = 0.0;
    double ref = 0.0;
    for (const auto& s : statuses) {
      const double p_star = oracle_action(s)[0];
      abs_dev += std::abs(action(s)[0] - p_star);
      ref += p_star;
    }
    summary.waterfilling_deviation = abs_dev / ref;
  }

 private:
  WaterfillingSolution solve(const std::vector<EnvStatus>& statuses) const {
    std::vector<double> gains;
    gains.reserve(statuses.size());
    for (const auto& s : statuses) gains.push_back(s[0]);
    return waterfilling_oracle(gains, env_.config().avg_power_budget, env_.config().noise_power);
  }

  Eigen::VectorXd action(const EnvStatus& status) const {
    if (learner_) return policy_action(learner_->policy, env_, status);
    return Eigen::VectorXd::Constant(
        1, std::min(reference_.power(status[0]), env_.config().max_power));
  }

  PowerControlEnv env_;
  Algorithm algorithm_;
  std::optional<DeterministicLearner> learner_;
  WaterfillingSolution reference_;
};

std::unique_ptr<Runner> make_runner(const ExperimentConfig& config) {
  if (config.problem == Problem::UserAssoc) {
    switch (config.algorithm) {
      case Algorithm::ModelFreeStochastic:
        return std::make_unique<StochasticRunner>(config);
      case Algorithm::Supervised:
        return std::make_unique<SupervisedRunner>(config);
      case Algorithm::Oracle:
        return std::make_unique<AssociationOracleRunner>(config);
      default:
        break;
    }
  } else {
    switch (config.algorithm) {
      case Algorithm::ModelBased:
      case Algorithm::ModelFreeDet:
      case Algorithm::Oracle:
        return std::make_unique<PowerControlRunner>(config, config.algorithm);
      default:
        break;
    }
  }
  throw std::invalid_argument("algorithm " + to_string(config.algorithm) +
                              " is not available for problem " + to_string(config.problem));
}

double trailing_mean(std::span<const double> series, std::size_t end, int window) {
  const std::size_t n = std::min<std::size_t>(end, static_cast<std::size_t>(window));
  double sum = 0.0;
  for (std::size_t i = end - n; i < end; ++i) sum += series[i];
  return sum / static_cast<double>(n);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (iterations <= 0) throw std::invalid_argument("iterations must be > 0");
  if (eval_every <= 0) throw std::invalid_argument("eval_every must be > 0");
  if (eval_samples <= 0) throw std::invalid_argument("eval_samples must be > 0");
  if (moving_average_window <= 0) throw std::invalid_argument("moving_average_window must be > 0");
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");
  for (int h : hidden_layers) {
    if (h <= 0) throw std::invalid_argument("hidden_layers entries must be > 0");
  }
  if (!(lr.base > 0.0)) throw std::invalid_argument("lr_base must be > 0");
  if (!(lr.decay >= 0.0)) throw std::invalid_argument("lr_decay must be >= 0");
  if (!(exploration_fraction >= 0.0)) throw std::invalid_argument("exploration_fraction must be >= 0");
  if (!(exploration_decay >= 0.0)) throw std::invalid_argument("exploration_decay must be >= 0");

  if (problem == Problem::UserAssoc) {
    user_assoc.validate();
    if (algorithm == Algorithm::ModelBased || algorithm == Algorithm::ModelFreeDet) {
      throw std::invalid_argument("algorithm: " + to_string(algorithm) +
                                  " needs a continuous-action problem (power_control)");
    }
  } else {
    power_control.validate();
    if (algorithm == Algorithm::ModelFreeStochastic || algorithm == Algorithm::Supervised) {
      throw std::invalid_argument("algorithm: " + to_string(algorithm) +
                                  " needs a discrete-action problem (user_assoc)");
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  auto runner = make_runner(config);

  StepRng train{make_stream(config.seed, kTrainStatus), make_stream(config.seed, kTrainAction)};
  Rng curve_status = make_stream(config.seed, kCurveStatus);
  Rng curve_action = make_stream(config.seed, kCurveAction);

  ExperimentResult result;
  std::vector<double> rates;
  std::vector<double> violations;
  std::vector<double> lagrangians;
  rates.reserve(config.iterations);
  violations.reserve(config.iterations);
  lagrangians.reserve(config.iterations);

  const int window = config.moving_average_window;
  auto record = [&](long iteration, double multiplier_norm) {
    const std::size_t n = rates.size();
    result.records.push_back({iteration, trailing_mean(rates, n, window),
                              trailing_mean(violations, n, window),
                              trailing_mean(lagrangians, n, window), multiplier_norm});
  };

  long t = 0;
  double multiplier_norm = 0.0;
  try {
    for (t = 1; t <= config.iterations; ++t) {
      const StepMetrics m = runner->train_step(train);
      const CurvePoint p = runner->curve_point(curve_status, curve_action);
      rates.push_back(p.rate);
      violations.push_back(p.violated ? 1.0 : 0.0);
      lagrangians.push_back(m.lagrangian);
      multiplier_norm = m.multiplier_norm;
      if (t % config.eval_every == 0 || t == config.iterations) record(t, multiplier_norm);
    }
    t = config.iterations;
  } catch (const DivergenceError& e) {
    result.failed = true;
    result.failure_message = e.what();
    --t;
    if (!rates.empty() && (result.records.empty() || result.records.back().iteration != t)) {
      record(t, multiplier_norm);
    }
  }

  result.summary.iterations_completed = t;
  if (!result.records.empty()) {
    result.summary.final_avg_rate = result.records.back().avg_rate;
    result.summary.final_violation_prob = result.records.back().violation_prob;
  }
  if (!result.failed) runner->final_eval(result.summary, config);
  return result;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
  if (series.empty()) throw std::invalid_argument("moving_average: empty series");
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = trailing_mean(series, i + 1, window);
  return out;
}

OracleComparison compare_to_oracle(const ExperimentResult& result,
                                   const ExperimentResult& oracle_result) {
  if (oracle_result.summary.final_avg_rate == 0.0) {
    throw std::invalid_argument("compare_to_oracle: oracle rate is zero");
  }
  return {result.summary.final_avg_rate / oracle_result.summary.final_avg_rate,
          result.summary.final_violation_prob - oracle_result.summary.final_violation_prob};
}

std::string to_string(Problem problem) {
  return problem == Problem::UserAssoc ? "user_assoc" : "power_control";
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::ModelBased:
      return "model-based";
    case Algorithm::ModelFreeDet:
      return "model-free-det";
    case Algorithm::ModelFreeStochastic:
      return "model-free-sto";
    case Algorithm::Supervised:
      return "supervised";
    case Algorithm::Oracle:
      return "oracle";
  }
  return "unknown";
}

}  // namespace pdl
