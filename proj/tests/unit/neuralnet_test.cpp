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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pdl/neuralnet.hpp"
#include "pdl/random.hpp"

namespace pdl {
namespace {

using testing::fd_input_gradient;
using testing::fd_param_gradient;
using testing::flatten;
using testing::reference_forward;
using testing::relative_error;

Eigen::VectorXd random_vector(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

MlpSpec spec(std::vector<int> sizes, OutputActivation act) {
  return {std::move(sizes), HiddenActivation::Tanh, act};
}

TEST(MlpSpec, RejectsBadShapes) {
  EXPECT_THROW(spec({3}, OutputActivation::Identity()).validate(), std::invalid_argument);
  EXPECT_THROW(spec({3, 0, 2}, OutputActivation::Identity()).validate(), std::invalid_argument);
  EXPECT_THROW(spec({3, 4, 5}, OutputActivation::GroupedSoftmax(2)).validate(),
               std::invalid_argument);
  EXPECT_THROW(spec({3, 4, 6}, OutputActivation::GroupedSoftmax(0)).validate(),
               std::invalid_argument);
  EXPECT_NO_THROW(spec({3, 4, 6}, OutputActivation::GroupedSoftmax(3)).validate());
}

TEST(Mlp, InitIsDeterministicAndBounded) {
  const MlpSpec s = spec({6, 20, 20, 3}, OutputActivation::ReLU());
  const Mlp a = Mlp::init(s, 42);
  const Mlp b = Mlp::init(s, 42);
  const Mlp c = Mlp::init(s, 43);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  for (const auto& layer : a.layers()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.cols()));
    EXPECT_LE(layer.weight.cwiseAbs().maxCoeff(), bound);
    EXPECT_TRUE(layer.bias.isZero());
  }
  EXPECT_EQ(a.num_parameters(), 6u * 20 + 20 + 20 * 20 + 20 + 20 * 3 + 3);
}

TEST(Mlp, ForwardMatchesReference) {
  Rng rng(1);
  for (auto act : {OutputActivation::Identity(), OutputActivation::ReLU(),
                   OutputActivation::GroupedSoftmax(2)}) {
    const Mlp net = Mlp::init(spec({4, 7, 5, 6}, act), 9);
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd x = random_vector(4, rng);
      EXPECT_LT((net.predict(x) - reference_forward(net, x)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_EQ(net.predict(x), net.forward(x).output());
    }
  }
}

TEST(Mlp, WrongInputSizeThrows) {
  const Mlp net = Mlp::init(spec({4, 5, 1}, OutputActivation::Identity()), 0);
  EXPECT_THROW(net.forward(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Mlp, OutputActivationProperties) {
  Rng rng(2);
  const Mlp relu = Mlp::init(spec({3, 8, 4}, OutputActivation::ReLU()), 1);
  const Mlp soft = Mlp::init(spec({3, 8, 6}, OutputActivation::GroupedSoftmax(3)), 1);
  for (int i = 0; i < 500; ++i) {
    const Eigen::VectorXd x = 5.0 * random_vector(3, rng);
    EXPECT_GE(relu.predict(x).minCoeff(), 0.0);
    const Eigen::VectorXd p = soft.predict(x);
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_NEAR(p.head(3).sum(), 1.0, 1e-12);
    EXPECT_NEAR(p.tail(3).sum(), 1.0, 1e-12);
  }
}

TEST(Mlp, SoftmaxIsStableForLargeLogits) {
  Eigen::VectorXd v(4);
  v << 1000.0, 999.0, -1000.0, 0.0;
  apply_output_activation(OutputActivation::GroupedSoftmax(2), v);
  EXPECT_TRUE(v.allFinite());
  EXPECT_NEAR(v[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
  EXPECT_NEAR(v[2] + v[3], 1.0, 1e-12);
}

TEST(Mlp, ZeroInputZeroWeightsGivesBias) {
  Mlp net = Mlp::init(spec({2, 3, 2}, OutputActivation::Identity()), 0);
  net.mutable_layers().back().weight.setZero();
  net.mutable_layers().back().bias << 0.25, -0.5;
  const Eigen::VectorXd y = net.predict(Eigen::VectorXd::Zero(2));
  EXPECT_DOUBLE_EQ(y[0], 0.25);
  EXPECT_DOUBLE_EQ(y[1], -0.5);
}

struct GradCase {
  std::vector<int> sizes;
  OutputActivation act;
};

class MlpGradientTest : public ::testing::TestWithParam<int> {};

TEST_P(MlpGradientTest, BackwardMatchesFiniteDifferences) {
  const std::vector<GradCase> cases = {
      {{3, 5, 2}, OutputActivation::Identity()},
      {{4, 6, 6, 3}, OutputActivation::ReLU()},
      {{2, 5, 4, 6}, OutputActivation::GroupedSoftmax(3)},
      {{6, 20, 20, 6}, OutputActivation::GroupedSoftmax(2)},
      {{1, 4, 1}, OutputActivation::ReLU()},
  };
  const auto& c = cases[static_cast<std::size_t>(GetParam())];
  Rng rng(100 + GetParam());
  for (int trial = 0; trial < 10; ++trial) {
    Mlp net = Mlp::init(spec(c.sizes, c.act), rng());
    // Lift ReLU outputs clear of the kink.
    if (c.act.kind() == OutputActivation::Kind::ReLU) net.mutable_layers().back().bias.array() += 0.5;
    const Eigen::VectorXd x = random_vector(c.sizes.front(), rng);
    const Eigen::VectorXd w = random_vector(c.sizes.back(), rng);
    const ForwardTrace trace = net.forward(x);
    EXPECT_LT(relative_error(flatten(net.backward_params(trace, w)), fd_param_gradient(net, x, w)),
              1e-6);
    EXPECT_LT(relative_error(net.backward_input(trace, w), fd_input_gradient(net, x, w)), 1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, MlpGradientTest, ::testing::Range(0, 5));

TEST(Mlp, ReluBlocksGradientWhenInactive) {
  Mlp net = Mlp::init(spec({2, 3, 1}, OutputActivation::ReLU()), 3);
  net.mutable_layers().back().weight.setZero();
  net.mutable_layers().back().bias << -1.0;
  const ForwardTrace trace = net.forward(Eigen::VectorXd::Ones(2));
  EXPECT_EQ(flatten(net.backward_params(trace, Eigen::VectorXd::Ones(1))).squaredNorm(), 0.0);
}

TEST(Mlp, PreactivationBackwardMatchesIdentityHead) {
  Rng rng(5);
  const Mlp net = Mlp::init(spec({3, 6, 2}, OutputActivation::Identity()), 4);
  const Eigen::VectorXd x = random_vector(3, rng);
  const Eigen::VectorXd w = random_vector(2, rng);
  const ForwardTrace trace = net.forward(x);
  EXPECT_LT((flatten(net.backward_params(trace, w)) -
             flatten(net.backward_params_preactivation(trace, w)))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(Mlp, DiagonalSoftmaxJacobianIsDetectablyWrong) {
  Rng rng(6);
  const Mlp net = Mlp::init(spec({3, 5, 4}, OutputActivation::GroupedSoftmax(2)), 8);
  const Eigen::VectorXd x = random_vector(3, rng);
  const Eigen::VectorXd w = random_vector(4, rng);
  const auto bad = detail::backward_params(net, net.forward(x), w,
                                           detail::SoftmaxJacobian::DiagonalOnly);
  EXPECT_GT(relative_error(flatten(bad), fd_param_gradient(net, x, w)), 1e-2);
}

TEST(Mlp, SgdStepMovesAlongOrAgainstGradient) {
  const Mlp start = Mlp::init(spec({2, 4, 1}, OutputActivation::Identity()), 11);
  MlpGradients g = MlpGradients::zeros_like(start.spec());
  g.layers.back().bias << 2.0;
  Mlp up = start;
  Mlp down = start;
  up.sgd_step(g, 0.1, Direction::Ascent);
  down.sgd_step(g, 0.1, Direction::Descent);
  EXPECT_DOUBLE_EQ(up.layers().back().bias[0], 0.2);
  EXPECT_DOUBLE_EQ(down.layers().back().bias[0], -0.2);

  Mlp same = start;
  same.sgd_step(MlpGradients::zeros_like(start.spec()), 0.1, Direction::Ascent);
  EXPECT_TRUE(same == start);
  same.sgd_step(g, 0.0, Direction::Ascent);
  EXPECT_TRUE(same == start);
}

TEST(Mlp, NonFiniteGradientIsRejectedAndLeavesNetworkUntouched) {
  const Mlp start = Mlp::init(spec({2, 4, 1}, OutputActivation::Identity()), 12);
  Mlp net = start;
  MlpGradients g = MlpGradients::zeros_like(start.spec());
  g.layers.front().weight(0, 0) = std::nan("");
  EXPECT_THROW(net.sgd_step(g, 0.1, Direction::Ascent), DivergenceError);
  EXPECT_TRUE(net == start);

  MlpGradients wrong = MlpGradients::zeros_like(spec({2, 5, 1}, OutputActivation::Identity()));
  EXPECT_THROW(net.sgd_step(wrong, 0.1, Direction::Ascent), std::invalid_argument);
}

TEST(Mlp, GradientArithmetic) {
  const MlpSpec s = spec({2, 3, 1}, OutputActivation::Identity());
  MlpGradients a = MlpGradients::zeros_like(s);
  a.layers[0].weight.setConstant(1.0);
  MlpGradients b = a;
  a += b;
  a *= 0.25;
  EXPECT_DOUBLE_EQ(a.layers[0].weight(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(a.squared_norm(), 6 * 0.25);
  EXPECT_TRUE(a.all_finite());
}

TEST(LrSchedule, DefaultConstants) {
  const LrSchedule lr;
  EXPECT_DOUBLE_EQ(lr.at(0), 0.01);
  EXPECT_DOUBLE_EQ(lr.at(1000), 0.005);
  EXPECT_DOUBLE_EQ(lr_schedule(0.01, 0.001, 9000), 0.001);
  for (long t = 0; t < 10000; t += 37) EXPECT_GE(lr.at(t), lr.at(t + 1));
}

}  // namespace
}  // namespace pdl
