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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pdl/model.hpp"
#include "pdl/power_control.hpp"
#include "pdl/trainers.hpp"
#include "pdl/user_assoc.hpp"

namespace pdl {
namespace {

using testing::flatten;

StepRng step_rng(std::uint64_t seed) { return {make_stream(seed, 1), make_stream(seed, 2)}; }

// One user, two choices, every action overloads both constraints.
class AlwaysViolatedEnv : public DiscreteEnvironment {
 public:
  EnvStatus sample_status(Rng& rng) const override {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EnvStatus s(2);
    s << u(rng), u(rng);
    return s;
  }
  Eigen::VectorXd features(const EnvStatus& s) const override { return s; }
  Observation observe(const EnvStatus&, const Association&) const override {
    return {0.0, Eigen::VectorXd::Ones(2), Eigen::VectorXd()};
  }
  int num_groups() const override { return 1; }
  int group_size() const override { return 2; }
  int num_instant_constraints() const override { return 2; }
  double objective_scale() const override { return 1.0; }
  Eigen::VectorXd constraint_floor() const override { return Eigen::VectorXd::Constant(2, -1.0); }
};

// Always hands out the same status, so a training loop sees a frozen batch.
class FixedStatusEnv : public DiscreteEnvironment {
 public:
  FixedStatusEnv(const UserAssocEnv& inner, EnvStatus status) : inner_(inner), status_(status) {}
  EnvStatus sample_status(Rng&) const override { return status_; }
  Eigen::VectorXd features(const EnvStatus& s) const override { return inner_.features(s); }
  Observation observe(const EnvStatus& s, const Association& a) const override {
    return inner_.observe(s, a);
  }
  int num_groups() const override { return inner_.num_groups(); }
  int group_size() const override { return inner_.group_size(); }
  int num_instant_constraints() const override { return inner_.num_instant_constraints(); }
  double objective_scale() const override { return inner_.objective_scale(); }
  Eigen::VectorXd constraint_floor() const override { return inner_.constraint_floor(); }

 private:
  const UserAssocEnv& inner_;
  EnvStatus status_;
};

// J = -(x - 2h)^2, c = x - 1, h ~ U(0, 1); no analytic model exposed.
class QuadraticEnv : public ContinuousEnvironment {
 public:
  EnvStatus sample_status(Rng& rng) const override {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return EnvStatus::Constant(1, u(rng));
  }
  Eigen::VectorXd features(const EnvStatus& s) const override { return s; }
  Observation observe(const EnvStatus& s, const Eigen::VectorXd& x) const override {
    const double d = x[0] - 2.0 * s[0];
    return {-d * d, Eigen::VectorXd(), Eigen::VectorXd::Constant(1, x[0] - 1.0)};
  }
  int action_size() const override { return 1; }
  int feature_size() const override { return 1; }
  int num_avg_constraints() const override { return 1; }
  Eigen::VectorXd action_lower() const override { return Eigen::VectorXd::Zero(1); }
  Eigen::VectorXd action_upper() const override { return Eigen::VectorXd::Constant(1, 5.0); }
  double objective_scale() const override { return 1.0; }
  Eigen::VectorXd initial_action() const override { return Eigen::VectorXd::Constant(1, 0.5); }
};

class QuadraticModelEnv : public QuadraticEnv, public AnalyticModel {
 public:
  ModelGradients analytic_gradients(const EnvStatus& s, const Eigen::VectorXd& x) const override {
    return {Eigen::VectorXd::Constant(1, -2.0 * (x[0] - 2.0 * s[0])), Eigen::MatrixXd(0, 1),
            Eigen::MatrixXd::Ones(1, 1)};
  }
};

// True action-gradients in place of fitted value networks.
class ExactCritic : public Critic {
 public:
  ExactCritic(const AnalyticModel& model, double scale) : model_(model), scale_(scale) {}
  void fit(std::span<const CriticSample>, double) override {}
  CriticGradients gradients(const EnvStatus& s, const Eigen::VectorXd&,
                            const Eigen::VectorXd& x) const override {
    const ModelGradients g = model_.analytic_gradients(s, x);
    return {g.objective / scale_, g.avg_constraints};
  }

 private:
  const AnalyticModel& model_;
  double scale_;
};

// ---------------------------------------------------------------------------
// Stochastic learner

TEST(StochasticLearner, ShapesAndInitialization) {
  const UserAssocEnv env{UserAssocConfig{}};
  const StochasticLearner l = make_stochastic_learner(env, {});
  EXPECT_EQ(l.policy.spec().layer_sizes, (std::vector<int>{6, 20, 20, 6}));
  EXPECT_EQ(l.multiplier.spec().layer_sizes, (std::vector<int>{6, 20, 20, 2}));
  EXPECT_EQ(l.value.spec().layer_sizes, (std::vector<int>{6, 20, 20, 3}));
  EXPECT_EQ(l.policy.spec().output_activation, OutputActivation::GroupedSoftmax(2));
  EXPECT_EQ(l.multiplier.spec().output_activation, OutputActivation::ReLU());
  EXPECT_EQ(l.value.spec().output_activation, OutputActivation::ReLU());
  EXPECT_EQ(l.batch_size, 16);
  EXPECT_EQ(l.baseline, BaselineKind::Lagrangian);
  EXPECT_DOUBLE_EQ(l.lr.base, 0.01);
  EXPECT_DOUBLE_EQ(l.lr.decay, 0.001);
}

TEST(ScoreEstimator, UnbiasedOnEnumerableInstance) {
  UserAssocConfig c;
  c.num_users = 1;
  c.capacity = 1;
  const UserAssocEnv env(c);
  Rng rng = make_stream(21, 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    StochasticLearnerOptions o;
    o.seed = seed;
    const StochasticLearner l = make_stochastic_learner(env, o);
    const EnvStatus h = env.sample_status(rng);
    const Eigen::VectorXd lambda = l.multiplier.predict(env.features(h)).array() + 0.3;
    const auto plain = testing::enumerate_score_gradient(l.policy, env, h, lambda, 0.0);
    const auto shifted = testing::enumerate_score_gradient(l.policy, env, h, lambda, 12.5);
    EXPECT_LT((plain.estimator_mean - plain.exact).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((shifted.estimator_mean - plain.exact).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ScoreEstimator, ExactGradientAgreesWithFiniteDifferences) {
  const UserAssocEnv env{UserAssocConfig{}};
  const StochasticLearner l = make_stochastic_learner(env, {});
  Rng rng = make_stream(22, 0);
  const EnvStatus h = env.sample_status(rng);
  const Eigen::VectorXd lambda = Eigen::VectorXd::Constant(2, 0.4);
  const auto grads = testing::enumerate_score_gradient(l.policy, env, h, lambda, 0.0);

  auto expected_l = [&](const Mlp& policy) {
    const Eigen::VectorXd p = testing::reference_forward(policy, env.features(h));
    double total = 0.0;
    for (int code = 0; code < 8; ++code) {
      const Association a{code >> 2 & 1, code >> 1 & 1, code & 1};
      const Observation obs = env.observe(h, a);
      total += p[a[0]] * p[2 + a[1]] * p[4 + a[2]] *
               (obs.objective_value / env.objective_scale() - lambda.dot(obs.instant_constraints));
    }
    return total;
  };
  Mlp probe = l.policy;
  auto& bias = probe.mutable_layers().back().bias;
  for (Eigen::Index i = 0; i < bias.size(); ++i) {
    const double saved = bias[i];
    bias[i] = saved + 1e-6;
    const double up = expected_l(probe);
    bias[i] = saved - 1e-6;
    const double down = expected_l(probe);
    bias[i] = saved;
    const Eigen::Index idx = grads.exact.size() - bias.size() + i;
    EXPECT_NEAR(grads.exact[idx], (up - down) / 2e-6, 1e-6);
  }
}

TEST(ScoreEstimator, MultiUserEnumerationIsUnbiased) {
  const UserAssocEnv env{UserAssocConfig{}};
  StochasticLearnerOptions o;
  o.seed = 4;
  const StochasticLearner l = make_stochastic_learner(env, o);
  Rng rng = make_stream(23, 0);
  const EnvStatus h = env.sample_status(rng);
  const auto g = testing::enumerate_score_gradient(l.policy, env, h,
                                                   Eigen::VectorXd::Constant(2, 0.7), -3.0);
  EXPECT_LT((g.estimator_mean - g.exact).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ScoreEstimator, SymmetricInstanceHasZeroExpectedUpdate) {
  UserAssocConfig c;
  c.num_users = 1;
  c.capacity = 1;
  const UserAssocEnv env(c);
  const StochasticLearner l = make_stochastic_learner(env, {});
  const EnvStatus equal = EnvStatus::Constant(2, 1e5);
  // Equal SNRs and equal multipliers make L the same for both actions.
  const auto g = testing::enumerate_score_gradient(l.policy, env, equal,
                                                   Eigen::VectorXd::Constant(2, 0.5), 0.0);
  EXPECT_LT(g.estimator_mean.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StochasticStep, PersistentViolationRaisesMultiplier) {
  const AlwaysViolatedEnv env;
  StochasticLearnerOptions o;
  o.lr = {1e-3, 0.0};
  StochasticLearner l = make_stochastic_learner(env, o);
  const Eigen::VectorXd probe_h = Eigen::VectorXd::Constant(2, 0.3);
  const Eigen::VectorXd before = l.multiplier.predict(probe_h);
  StepRng rng = step_rng(1);
  stochastic_step(l, env, rng);
  const Eigen::VectorXd after = l.multiplier.predict(probe_h);
  EXPECT_GE(after[0], before[0]);
  EXPECT_GE(after[1], before[1]);
}

TEST(StochasticStep, InactiveMultiplierRecoversUnderViolation) {
  const AlwaysViolatedEnv env;
  StochasticLearner l = make_stochastic_learner(env, {});
  l.multiplier.mutable_layers().back().bias.setConstant(-0.5);
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(2, 0.0);
  ASSERT_EQ(l.multiplier.predict(h).maxCoeff(), 0.0);
  StepRng rng = step_rng(2);
  for (int i = 0; i < 200; ++i) stochastic_step(l, env, rng);
  EXPECT_GT(l.multiplier.predict(h).minCoeff(), 0.0);
}

TEST(StochasticStep, MultipliersStayNonNegative) {
  const UserAssocEnv env{UserAssocConfig{}};
  StochasticLearner l = make_stochastic_learner(env, {});
  StepRng rng = step_rng(3);
  Rng probe = make_stream(3, 9);
  for (int i = 0; i < 300; ++i) {
    const StepMetrics m = stochastic_step(l, env, rng);
    ASSERT_GE(m.violation_fraction, 0.0);
    ASSERT_LE(m.violation_fraction, 1.0);
    ASSERT_TRUE(std::isfinite(m.lagrangian));
    ASSERT_GE(l.multiplier.predict(env.features(env.sample_status(probe))).minCoeff(), 0.0);
  }
  EXPECT_EQ(l.t, 300);
}

TEST(StochasticStep, DeterministicGivenSeeds) {
  const UserAssocEnv env{UserAssocConfig{}};
  StochasticLearner a = make_stochastic_learner(env, {});
  StochasticLearner b = make_stochastic_learner(env, {});
  StepRng ra = step_rng(4);
  StepRng rb = step_rng(4);
  for (int i = 0; i < 20; ++i) {
    stochastic_step(a, env, ra);
    stochastic_step(b, env, rb);
  }
  EXPECT_TRUE(a.policy == b.policy);
  EXPECT_TRUE(a.multiplier == b.multiplier);
  EXPECT_TRUE(a.value == b.value);
}

TEST(StochasticStep, RejectsMismatchedLearner) {
  const UserAssocEnv env{UserAssocConfig{}};
  UserAssocConfig other;
  other.num_users = 4;
  StochasticLearner l = make_stochastic_learner(UserAssocEnv{other}, {});
  StepRng rng = step_rng(5);
  EXPECT_THROW(stochastic_step(l, env, rng), std::invalid_argument);
}

TEST(StochasticStep, ObjectiveBaselineOptionRuns) {
  const UserAssocEnv env{UserAssocConfig{}};
  StochasticLearnerOptions o;
  o.baseline = BaselineKind::Objective;
  StochasticLearner a = make_stochastic_learner(env, o);
  StochasticLearner b = make_stochastic_learner(env, {});
  StepRng ra = step_rng(6);
  StepRng rb = step_rng(6);
  for (int i = 0; i < 50; ++i) {
    stochastic_step(a, env, ra);
    stochastic_step(b, env, rb);
  }
  EXPECT_TRUE(a.policy.all_finite());
  EXPECT_FALSE(a.policy == b.policy);
}

TEST(Sampling, AssociationFromProbabilities) {
  Eigen::VectorXd p(4);
  p << 0.0, 1.0, 1.0, 0.0;
  Rng rng(1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_association(p, 2, rng), (Association{1, 0}));
  EXPECT_EQ(argmax_association(p, 2), (Association{1, 0}));

  Eigen::VectorXd q(2);
  q << 0.3, 0.7;
  int ones = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) ones += sample_association(q, 2, rng)[0];
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.7, 5.0 * std::sqrt(0.21 / n));
}

// ---------------------------------------------------------------------------
// Deterministic learners

TEST(DeterministicLearner, StartsAtInitialAction) {
  const PowerControlEnv env{PowerControlConfig{}};
  const DeterministicLearner l = make_deterministic_learner(env, {});
  Rng rng = make_stream(7, 0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_DOUBLE_EQ(policy_action(l.policy, env, env.sample_status(rng))[0], 1.0);
  }
  EXPECT_EQ(l.value_nets.size(), 2u);
  EXPECT_EQ(l.value_nets[0].spec().input_size(), 2);
  EXPECT_EQ(l.value_nets[0].spec().output_activation, OutputActivation::Identity());
  EXPECT_DOUBLE_EQ(l.exploration.sigma0, 0.4);
  EXPECT_EQ(l.avg_multipliers, Eigen::VectorXd::Zero(1));
}

TEST(ExplorationSchedule, NonIncreasing) {
  const ExplorationSchedule s{0.4, 1e-3};
  EXPECT_DOUBLE_EQ(s.at(0), 0.4);
  EXPECT_DOUBLE_EQ(s.at(1000), 0.2);
  for (long t = 0; t < 5000; t += 7) EXPECT_LE(s.at(t + 1), s.at(t));
}

TEST(ModelBasedStep, FirstUpdateAscendsRate) {
  const PowerControlEnv env{PowerControlConfig{}};
  DeterministicLearnerOptions o;
  o.lr = {1e-3, 0.0};
  DeterministicLearner l = make_deterministic_learner(env, o);
  Rng probe = make_stream(8, 0);
  std::vector<EnvStatus> hs;
  for (int i = 0; i < 200; ++i) hs.push_back(env.sample_status(probe));
  auto mean_rate = [&] {
    double r = 0.0;
    for (const auto& h : hs) r += env.observe(h, policy_action(l.policy, env, h)).objective_value;
    return r / static_cast<double>(hs.size());
  };
  const double before = mean_rate();
  StepRng rng = step_rng(8);
  const StepMetrics m = modelbased_det_step(l, env, rng);
  EXPECT_GT(mean_rate(), before);
  EXPECT_EQ(m.multiplier_norm, 0.0);  // c = 0 at p = budget
}

TEST(ModelBasedStep, ZeroLearningRateLeavesParameters) {
  const PowerControlEnv env{PowerControlConfig{}};
  DeterministicLearnerOptions o;
  o.lr = {0.0, 0.0};
  DeterministicLearner l = make_deterministic_learner(env, o);
  const Mlp before = l.policy;
  StepRng rng = step_rng(9);
  for (int i = 0; i < 5; ++i) modelbased_det_step(l, env, rng);
  EXPECT_TRUE(l.policy == before);
}

TEST(ModelBasedStep, RequiresAnalyticModel) {
  const QuadraticEnv env;
  DeterministicLearner l = make_deterministic_learner(env, {});
  StepRng rng = step_rng(10);
  EXPECT_THROW(modelbased_det_step(l, env, rng), std::invalid_argument);
}

TEST(AverageMultiplier, ClampedAtZero) {
  // The policy is pinned at p = 0, so c = -budget on every sample.
  const PowerControlEnv env{PowerControlConfig{}};
  DeterministicLearner l = make_deterministic_learner(env, {});
  l.policy.mutable_layers().back().bias.setConstant(-1.0);
  l.avg_multipliers << 0.05;
  StepRng rng = step_rng(11);
  double prev = l.avg_multipliers[0];
  for (int i = 0; i < 20; ++i) {
    modelbased_det_step(l, env, rng);
    EXPECT_LE(l.avg_multipliers[0], prev);
    EXPECT_GE(l.avg_multipliers[0], 0.0);
    prev = l.avg_multipliers[0];
  }
  EXPECT_EQ(l.avg_multipliers[0], 0.0);
}

TEST(ModelFreeStep, ExactCriticReproducesModelBasedUpdates) {
  const QuadraticModelEnv quad;
  const PowerControlEnv pc{PowerControlConfig{}};
  for (const ContinuousEnvironment* env : {static_cast<const ContinuousEnvironment*>(&quad),
                                           static_cast<const ContinuousEnvironment*>(&pc)}) {
    const auto& model = dynamic_cast<const AnalyticModel&>(*env);
    DeterministicLearnerOptions o;
    o.exploration_fraction = 0.0;
    DeterministicLearner a = make_deterministic_learner(*env, o);
    DeterministicLearner b = a;
    StepRng ra = step_rng(12);
    StepRng rb = step_rng(12);
    ExactCritic critic(model, env->objective_scale());
    for (int i = 0; i < 100; ++i) {
      modelbased_det_step(a, *env, ra);
      modelfree_det_step(b, *env, rb, critic);
      ASSERT_TRUE(a.policy == b.policy) << "step " << i;
      ASSERT_EQ(a.avg_multipliers, b.avg_multipliers);
    }
  }
}

TEST(ModelFreeStep, ValueNetworksLearnObservedValues) {
  const PowerControlEnv env{PowerControlConfig{}};
  DeterministicLearner l = make_deterministic_learner(env, {});
  Rng rng = make_stream(13, 0);
  auto critic_error = [&] {
    Rng probe = make_stream(13, 1);
    double err = 0.0;
    for (int i = 0; i < 200; ++i) {
      const EnvStatus h = env.sample_status(probe);
      Eigen::VectorXd in(2);
      in << 1.0, env.features(h)[0];
      const double v = l.value_nets[1].predict(in)[0];
      err += std::abs(v - 0.0);  // c = p - budget = 0 at p = 1
    }
    return err / 200.0;
  };
  const double before = critic_error();
  StepRng srng = step_rng(13);
  for (int i = 0; i < 2000; ++i) modelfree_det_step(l, env, srng);
  EXPECT_LT(critic_error(), before);
  (void)rng;
}

TEST(ModelFreeStep, WorksWithoutAnalyticModel) {
  const QuadraticEnv env;
  DeterministicLearner l = make_deterministic_learner(env, {});
  StepRng rng = step_rng(14);
  for (int i = 0; i < 500; ++i) {
    const StepMetrics m = modelfree_det_step(l, env, rng);
    ASSERT_TRUE(std::isfinite(m.lagrangian));
    ASSERT_GE(l.avg_multipliers[0], 0.0);
  }
}

// ---------------------------------------------------------------------------
// Supervised baseline and evaluation

TEST(Supervised, LossFallsOnFrozenBatch) {
  const UserAssocEnv inner{UserAssocConfig{}};
  Rng rng = make_stream(15, 0);
  const FixedStatusEnv env(inner, inner.sample_status(rng));
  SupervisedLearner l = make_supervised_learner(env, {});
  const DiscreteOracle oracle = [&](const EnvStatus& h) { return inner.oracle(h).association; };
  StepRng srng = step_rng(15);
  double early = 0.0;
  double late = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double loss = supervised_step(l, env, oracle, srng).loss;
    if (i < 100) early += loss;
    if (i >= 900) late += loss;
  }
  EXPECT_LT(late, 0.5 * early);
}

TEST(Supervised, ConfidentCorrectPolicyHasNoGradient) {
  const UserAssocEnv inner{UserAssocConfig{}};
  Rng rng = make_stream(16, 0);
  const EnvStatus h = inner.sample_status(rng);
  const FixedStatusEnv env(inner, h);
  const Association label = inner.oracle(h).association;
  SupervisedLearner l = make_supervised_learner(env, {});
  auto& out = l.policy.mutable_layers().back();
  out.weight.setZero();
  for (int k = 0; k < 3; ++k) {
    out.bias[2 * k + label[k]] = 40.0;
    out.bias[2 * k + 1 - label[k]] = -40.0;
  }
  const Mlp before = l.policy;
  StepRng srng = step_rng(16);
  supervised_step(l, env, [&](const EnvStatus&) { return label; }, srng);
  double drift = 0.0;
  for (std::size_t i = 0; i < before.layers().size(); ++i) {
    drift = std::max(drift, (before.layers()[i].weight - l.policy.layers()[i].weight)
                                .cwiseAbs()
                                .maxCoeff());
  }
  EXPECT_LT(drift, 1e-15);
}

TEST(Supervised, InfeasibleOracleIsAnError) {
  const UserAssocEnv env{UserAssocConfig{}};
  SupervisedLearner l = make_supervised_learner(env, {});
  StepRng srng = step_rng(17);
  EXPECT_THROW(supervised_step(l, env, [](const EnvStatus&) { return Association{0, 0, 0}; }, srng),
               std::runtime_error);
}

TEST(Supervised, SharesPolicyInitWithStochasticLearner) {
  const UserAssocEnv env{UserAssocConfig{}};
  EXPECT_TRUE(make_supervised_learner(env, {}).policy == make_stochastic_learner(env, {}).policy);
}

TEST(Evaluate, OraclePolicyNeverViolates) {
  const UserAssocEnv env{UserAssocConfig{}};
  Rng rng = make_stream(18, 0);
  std::vector<EnvStatus> hs;
  for (int i = 0; i < 2000; ++i) hs.push_back(env.sample_status(rng));
  const DiscretePolicy oracle = [&](const EnvStatus& h, Rng&) { return env.oracle(h).association; };
  EXPECT_EQ(evaluate_policy(oracle, env, hs, rng).violation_probability, 0.0);
}

TEST(Evaluate, UniformPolicyViolatesAQuarterOfTheTime) {
  const UserAssocEnv env{UserAssocConfig{}};
  Mlp uniform = make_stochastic_learner(env, {}).policy;
  uniform.mutable_layers().back().weight.setZero();
  Rng rng = make_stream(19, 0);
  const int n = 40000;
  const PolicyEvaluation e = evaluate_policy(uniform, env, n, EvalMode::Sample, rng);
  // 2 (1/2)^3: every user on the same BS.
  EXPECT_NEAR(e.violation_probability, 0.25, 5.0 * std::sqrt(0.25 * 0.75 / n));
}

TEST(Evaluate, ArgmaxOfOneHotEqualsSample) {
  const UserAssocEnv env{UserAssocConfig{}};
  Mlp hot = make_stochastic_learner(env, {}).policy;
  auto& out = hot.mutable_layers().back();
  out.weight.setZero();
  out.bias << 50, -50, -50, 50, 50, -50;
  Rng a = make_stream(20, 0);
  Rng b = make_stream(20, 0);
  const auto sample = evaluate_policy(hot, env, 500, EvalMode::Sample, a);
  const auto argmax = evaluate_policy(hot, env, 500, EvalMode::Argmax, b);
  EXPECT_DOUBLE_EQ(sample.avg_objective, argmax.avg_objective);
  EXPECT_EQ(sample.violation_probability, argmax.violation_probability);
  EXPECT_THROW(evaluate_policy(hot, env, 0, EvalMode::Sample, a), std::invalid_argument);
}

TEST(LagrangianSample, RecomputableFromParts) {
  LagrangianSample s{2.0, Eigen::Vector2d(1.0, -1.0), Eigen::Vector2d(0.5, 0.25),
                     Eigen::VectorXd::Constant(1, 0.2), Eigen::VectorXd::Constant(1, 3.0)};
  EXPECT_DOUBLE_EQ(s.lagrangian(), 2.0 - (0.5 - 0.25) - 0.6);
}

}  // namespace
}  // namespace pdl
