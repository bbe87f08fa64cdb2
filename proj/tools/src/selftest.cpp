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

#include "pdl/cli/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "pdl/harness.hpp"
#include "pdl/model.hpp"
#include "pdl/power_control.hpp"
#include "pdl/trainers.hpp"
#include "pdl/user_assoc.hpp"

namespace pdl::cli {

namespace {

constexpr double kFdEps = 1e-5;
constexpr double kFdTolerance = 1e-4;

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-8});
  return (a - b).norm() / scale;
}

Eigen::VectorXd flatten(const MlpGradients& g) {
  Eigen::Index n = 0;
  for (const auto& l : g.layers) n += l.weight.size() + l.bias.size();
  Eigen::VectorXd out(n);
  Eigen::Index i = 0;
  for (const auto& l : g.layers) {
    out.segment(i, l.weight.size()) = l.weight.reshaped();
    i += l.weight.size();
    out.segment(i, l.bias.size()) = l.bias;
    i += l.bias.size();
  }
  return out;
}

double probe(const Mlp& net, const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  return w.dot(net.predict(x));
}

// Worst relative error of backward_params / backward_input against central
// differences of w . f(x).
double gradient_check(Mlp net, const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                      detail::SoftmaxJacobian jacobian) {
  const ForwardTrace trace = net.forward(x);
  const Eigen::VectorXd analytic = flatten(detail::backward_params(net, trace, w, jacobian));

  Eigen::VectorXd numeric(analytic.size());
  Eigen::Index i = 0;
  for (auto& layer : net.mutable_layers()) {
    auto nudge = [&](double& p) {
      const double saved = p;
      p = saved + kFdEps;
      const double up = probe(net, x, w);
      p = saved - kFdEps;
      const double down = probe(net, x, w);
      p = saved;
      numeric[i++] = (up - down) / (2.0 * kFdEps);
    };
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) nudge(layer.weight(r, c));
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) nudge(layer.bias[r]);
  }

  Eigen::VectorXd numeric_input(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[d] += kFdEps;
    xm[d] -= kFdEps;
    numeric_input[d] = (probe(net, xp, w) - probe(net, xm, w)) / (2.0 * kFdEps);
  }
  // The input gradient has no injectable fault; it is checked as is.
  return std::max(relative_error(analytic, numeric),
                  relative_error(net.backward_input(trace, w), numeric_input));
}

CheckResult check_gradients(const SelftestOptions& options) {
  Rng rng = make_stream(options.seed, 1);
  std::uniform_int_distribution<int> width(1, 6);
  std::uniform_int_distribution<int> depth(0, 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto jacobian = options.inject_softmax_fault ? detail::SoftmaxJacobian::DiagonalOnly
                                                     : detail::SoftmaxJacobian::Full;
  double worst = 0.0;
  for (int n = 0; n < options.gradient_networks; ++n) {
    std::vector<int> sizes{width(rng)};
    for (int h = depth(rng); h >= 0; --h) sizes.push_back(width(rng) + 1);
    OutputActivation act = OutputActivation::Identity();
    switch (n % 3) {
      case 0:
        break;
      case 1:
        act = OutputActivation::ReLU();
        break;
      default: {
        const int group = 2 + n % 3;
        sizes.push_back(group * (1 + n % 2));
        act = OutputActivation::GroupedSoftmax(group);
      }
    }
    if (act.kind() != OutputActivation::Kind::GroupedSoftmax) sizes.push_back(width(rng));

    const Mlp net = Mlp::init({sizes, HiddenActivation::Tanh, act}, rng());
    Eigen::VectorXd x(sizes.front());
    for (auto& v : x) v = normal(rng);
    // Keep ReLU pre-activations away from the kink.
    if (act.kind() == OutputActivation::Kind::ReLU) {
      const auto& z = net.forward(x).pre_activations.back();
      if ((z.array().abs() < 1e-3).any()) continue;
    }
    Eigen::VectorXd w(sizes.back());
    for (auto& v : w) v = normal(rng);
    worst = std::max(worst, gradient_check(net, x, w, jacobian));
  }
  return {"mlp gradients vs finite differences", worst <= kFdTolerance,
          fmt("%.0f networks, worst rel err %.2e", options.gradient_networks, worst)};
}

// Exact expectation of the score-function estimator over every association,
// against the gradient of E_x[L] built from dE/dpi directly.
CheckResult check_estimator(const SelftestOptions& options, int num_users) {
  UserAssocConfig cfg;
  cfg.num_users = num_users;
  cfg.capacity = std::max(1, num_users - 1);
  const UserAssocEnv env(cfg);
  StochasticLearnerOptions lo;
  lo.seed = options.seed;
  const StochasticLearner learner = make_stochastic_learner(env, lo);

  Rng rng = make_stream(options.seed, 2);
  const EnvStatus status = env.sample_status(rng);
  const ForwardTrace trace = learner.policy.forward(env.features(status));
  const Eigen::VectorXd& probs = trace.output();
  const Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(cfg.num_bs, 0.3, 0.7);
  const int B = cfg.num_bs;

  auto lagrangian = [&](const Association& a) {
    const Observation obs = env.observe(status, a);
    return obs.objective_value / env.objective_scale() - lambda.dot(obs.instant_constraints);
  };

  long total = 1;
  for (int k = 0; k < num_users; ++k) total *= B;
  double worst_plain = 0.0;
  double worst_shift = 0.0;
  MlpGradients expected = MlpGradients::zeros_like(learner.policy.spec());
  MlpGradients shifted = MlpGradients::zeros_like(learner.policy.spec());
  Eigen::VectorXd de_dpi = Eigen::VectorXd::Zero(probs.size());
  for (long code = 0; code < total; ++code) {
    Association a(num_users);
    long c = code;
    for (int k = num_users - 1; k >= 0; --k) {
      a[k] = static_cast<int>(c % B);
      c /= B;
    }
    double p = 1.0;
    for (int k = 0; k < num_users; ++k) p *= probs[k * B + a[k]];
    const double l = lagrangian(a);

    MlpGradients term = score_function_gradient(learner.policy, trace, a, l);
    term *= p;
    expected += term;
    MlpGradients shifted_term = score_function_gradient(learner.policy, trace, a, l - 3.7);
    shifted_term *= p;
    shifted += shifted_term;

    for (int k = 0; k < num_users; ++k) {
      de_dpi[k * B + a[k]] += l * p / probs[k * B + a[k]];
    }
  }
  const Eigen::VectorXd exact = flatten(learner.policy.backward_params(trace, de_dpi));
  worst_plain = (flatten(expected) - exact).cwiseAbs().maxCoeff();
  worst_shift = (flatten(shifted) - exact).cwiseAbs().maxCoeff();
  const double worst = std::max(worst_plain, worst_shift);
  std::ostringstream name;
  name << "score estimator unbiased, K=" << num_users << " B=" << B;
  return {name.str(), worst <= 1e-10,
          fmt("max |E[est] - grad| %.1e (shifted baseline %.1e)", worst_plain, worst_shift)};
}

CheckResult check_association_oracle(const SelftestOptions& options) {
  const UserAssocConfig cfg;
  const int n = 2000;
  Rng rng = make_stream(options.seed, 3);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const SnrMatrix snr = sample_status_ua(cfg, rng);
    const AssociationOracleResult got = exhaustive_oracle(snr, cfg);
    double best = -1.0;
    for (int code = 0; code < 8; ++code) {
      const Association a{code >> 2 & 1, code >> 1 & 1, code & 1};
      if ((capacity_violation(a, cfg).array() > 0.0).any()) continue;
      best = std::max(best, sum_rate(a, snr, cfg.bandwidth));
    }
    const bool feasible = !(capacity_violation(got.association, cfg).array() > 0.0).any();
    if (!feasible || std::abs(got.rate - best) > 1e-9 * best) ++failures;
  }
  return {"exhaustive oracle feasible and optimal", failures == 0,
          fmt("%.0f statuses, %.0f mismatches", n, failures)};
}

CheckResult check_waterfilling(const SelftestOptions& options) {
  const PowerControlConfig cfg;
  Rng rng = make_stream(options.seed, 4);
  std::vector<double> gains(10000);
  for (auto& g : gains) g = sample_gain_pc(cfg, rng);
  const WaterfillingSolution wf = waterfilling_oracle(gains, cfg.avg_power_budget, cfg.noise_power);
  double mean = 0.0;
  for (double g : gains) mean += wf.power(g);
  mean /= static_cast<double>(gains.size());
  const double err = std::abs(mean - cfg.avg_power_budget);
  return {"water-filling budget equation", err <= 1e-6 * cfg.avg_power_budget,
          fmt("|mean p - budget| %.1e, level 1/nu %.4f", err, 1.0 / wf.level)};
}

class ExactCritic : public Critic {
 public:
  ExactCritic(const AnalyticModel& model, double scale) : model_(model), scale_(scale) {}
  void fit(std::span<const CriticSample>, double) override {}
  CriticGradients gradients(const EnvStatus& status, const Eigen::VectorXd&,
                            const Eigen::VectorXd& action) const override {
    const ModelGradients g = model_.analytic_gradients(status, action);
    return {g.objective / scale_, g.avg_constraints};
  }

 private:
  const AnalyticModel& model_;
  double scale_;
};

CheckResult check_det_equivalence(const SelftestOptions& options) {
  const PowerControlEnv env{PowerControlConfig{}};
  DeterministicLearnerOptions lo;
  lo.seed = options.seed;
  lo.exploration_fraction = 0.0;
  DeterministicLearner a = make_deterministic_learner(env, lo);
  DeterministicLearner b = a;
  StepRng ra{make_stream(options.seed, 5), make_stream(options.seed, 6)};
  StepRng rb = ra;
  ExactCritic critic(env, env.objective_scale());
  int mismatches = 0;
  const int steps = 50;
  for (int i = 0; i < steps; ++i) {
    modelbased_det_step(a, env, ra);
    modelfree_det_step(b, env, rb, critic);
    if (!(a.policy == b.policy) || a.avg_multipliers != b.avg_multipliers) ++mismatches;
  }
  return {"model-free with exact critic == model-based", mismatches == 0,
          fmt("%.0f steps, %.0f differing updates", steps, mismatches)};
}

CheckResult check_uniform_violation(const SelftestOptions& options) {
  const UserAssocEnv env{UserAssocConfig{}};
  const int n = 40000;
  Rng rng = make_stream(options.seed, 7);
  std::vector<EnvStatus> statuses;
  statuses.reserve(n);
  for (int i = 0; i < n; ++i) statuses.push_back(env.sample_status(rng));
  const DiscretePolicy uniform = [](const EnvStatus&, Rng& r) {
    std::uniform_int_distribution<int> pick(0, 1);
    return Association{pick(r), pick(r), pick(r)};
  };
  const double p = evaluate_policy(uniform, env, statuses, rng).violation_probability;
  // 5 standard errors of a Bernoulli(0.25) mean.
  const double tol = 5.0 * std::sqrt(0.25 * 0.75 / n);
  return {"uniform association violation = 2 (1/2)^3", std::abs(p - 0.25) <= tol,
          fmt("estimate %.4f, tolerance %.4f", p, tol)};
}

CheckResult check_moving_average() {
  std::vector<double> ramp(1000);
  for (int i = 0; i < 1000; ++i) ramp[i] = i + 1;
  const double last = moving_average(ramp, 500).back();
  return {"moving average of 1..1000 ends at 750.5", std::abs(last - 750.5) < 1e-9,
          fmt("last value %.6f", last)};
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  std::vector<CheckResult> results;
  auto guarded = [&](const std::string& name, const std::function<CheckResult()>& fn) {
    try {
      results.push_back(fn());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("mlp gradients", [&] { return check_gradients(options); });
  guarded("score estimator K=1", [&] { return check_estimator(options, 1); });
  guarded("score estimator K=3", [&] { return check_estimator(options, 3); });
  guarded("exhaustive oracle", [&] { return check_association_oracle(options); });
  guarded("water-filling", [&] { return check_waterfilling(options); });
  guarded("deterministic equivalence", [&] { return check_det_equivalence(options); });
  guarded("uniform violation", [&] { return check_uniform_violation(options); });
  guarded("moving average", [] { return check_moving_average(); });
  return results;
}

bool print_selftest_table(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ')
        << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all;
}

}  // namespace pdl::cli
