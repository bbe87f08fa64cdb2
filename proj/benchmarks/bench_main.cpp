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

#include <benchmark/benchmark.h>

#include "pdl/power_control.hpp"
#include "pdl/trainers.hpp"
#include "pdl/user_assoc.hpp"

namespace {

using namespace pdl;

Mlp default_policy() {
  return Mlp::init({{6, 20, 20, 6}, HiddenActivation::Tanh, OutputActivation::GroupedSoftmax(2)},
                   1);
}

void BM_MlpForward(benchmark::State& state) {
  const Mlp net = default_policy();
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_MlpForward);

void BM_MlpBackward(benchmark::State& state) {
  const Mlp net = default_policy();
  const ForwardTrace trace = net.forward(Eigen::VectorXd::LinSpaced(6, -1.0, 1.0));
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(6);
  for (auto _ : state) benchmark::DoNotOptimize(net.backward_params(trace, w));
}
BENCHMARK(BM_MlpBackward);

void BM_StochasticStep(benchmark::State& state) {
  const UserAssocEnv env{UserAssocConfig{}};
  StochasticLearner l = make_stochastic_learner(env, {});
  StepRng rng{make_stream(1, 1), make_stream(1, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(stochastic_step(l, env, rng));
}
BENCHMARK(BM_StochasticStep);

void BM_ModelBasedStep(benchmark::State& state) {
  const PowerControlEnv env{PowerControlConfig{}};
  DeterministicLearner l = make_deterministic_learner(env, {});
  StepRng rng{make_stream(1, 1), make_stream(1, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(modelbased_det_step(l, env, rng));
}
BENCHMARK(BM_ModelBasedStep);

void BM_ExhaustiveOracle(benchmark::State& state) {
  UserAssocConfig c;
  c.num_users = static_cast<int>(state.range(0));
  c.capacity = (c.num_users + 1) / 2;
  Rng rng = make_stream(2, 0);
  const SnrMatrix snr = sample_status_ua(c, rng);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_oracle(snr, c));
}
BENCHMARK(BM_ExhaustiveOracle)->Arg(3)->Arg(8)->Arg(12);

void BM_Waterfilling(benchmark::State& state) {
  const PowerControlConfig c;
  Rng rng = make_stream(3, 0);
  std::vector<double> gains(static_cast<std::size_t>(state.range(0)));
  for (auto& g : gains) g = sample_gain_pc(c, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(waterfilling_oracle(gains, c.avg_power_budget, c.noise_power));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Waterfilling)->Range(1 << 10, 1 << 16)->Complexity();

}  // namespace

BENCHMARK_MAIN();
