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

#include "pdl/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pdl {

void PowerControlConfig::validate() const {
  if (!(avg_power_budget > 0.0)) throw std::invalid_argument("avg_power_budget must be > 0");
  if (!(mean_channel_gain > 0.0)) throw std::invalid_argument("mean_channel_gain must be > 0");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be > 0");
  if (!(max_power > avg_power_budget)) {
    throw std::invalid_argument("max_power must exceed avg_power_budget");
  }
}

double sample_gain_pc(const PowerControlConfig& config, Rng& rng) {
  std::exponential_distribution<double> dist(1.0 / config.mean_channel_gain);
  double g = dist(rng);
  while (!(g > 0.0)) g = dist(rng);
  return g;
}

double instant_rate_pc(double power, double gain, double noise) {
  if (power < 0.0) throw std::invalid_argument("instant_rate_pc: negative power");
  return std::log2(1.0 + power * gain / noise);
}

double WaterfillingSolution::power(double gain) const {
  return std::max(0.0, 1.0 / level - noise / gain);
}

namespace {

double mean_power(std::span<const double> gains, double water, double noise) {
  double total = 0.0;
  for (double g : gains) total += std::max(0.0, water - noise / g);
  return total / static_cast<double>(gains.size());
}

}  // namespace

WaterfillingSolution waterfilling_oracle(std::span<const double> gains, double budget,
                                         double noise) {
  if (gains.empty()) throw std::invalid_argument("waterfilling_oracle: no gain samples");
  if (!(budget > 0.0)) throw std::invalid_argument("waterfilling_oracle: budget must be > 0");
  if (!(noise > 0.0)) throw std::invalid_argument("waterfilling_oracle: noise must be > 0");

  double min_floor = std::numeric_limits<double>::infinity();
  double max_floor = 0.0;
  for (double g : gains) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("waterfilling_oracle: gains must be finite and positive");
    }
    min_floor = std::min(min_floor, noise / g);
    max_floor = std::max(max_floor, noise / g);
  }

  // Mean power is non-decreasing in the water level: zero at the lowest
  // floor, at least `budget` once the level clears every floor by `budget`.
  double lo = min_floor;
  double hi = max_floor + budget;
  if (!(mean_power(gains, lo, noise) <= budget) || !(mean_power(gains, hi, noise) >= budget)) {
    throw std::runtime_error("waterfilling_oracle: bisection bracket failure");
  }
  const double tol = 1e-6 * budget;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean_power(gains, mid, noise);
    if (std::abs(m - budget) <= tol * 1e-3) {
      lo = hi = mid;
      break;
    }
    (m < budget ? lo : hi) = mid;
  }
  double water = 0.5 * (lo + hi);

  // On a fixed active set mean power is affine in the level; solve it exactly
  // and keep the result if it reproduces the same active set.
  double sum_floor = 0.0;
  std::size_t active = 0;
  for (double g : gains) {
    if (water > noise / g) {
      sum_floor += noise / g;
      ++active;
    }
  }
  if (active > 0) {
    const double exact = (budget * static_cast<double>(gains.size()) + sum_floor) /
                         static_cast<double>(active);
    std::size_t check = 0;
    for (double g : gains) check += exact > noise / g ? 1 : 0;
    if (check == active) water = exact;
  }
  if (std::abs(mean_power(gains, water, noise) - budget) > tol) {
    throw std::runtime_error("waterfilling_oracle: failed to meet the budget");
  }
  return WaterfillingSolution{1.0 / water, noise};
}

PowerControlEnv::PowerControlEnv(PowerControlConfig config) : config_(config) {
  config_.validate();
}

EnvStatus PowerControlEnv::sample_status(Rng& rng) const {
  return EnvStatus::Constant(1, sample_gain_pc(config_, rng));
}

Eigen::VectorXd PowerControlEnv::features(const EnvStatus& status) const {
  return status / config_.mean_channel_gain;
}

Observation PowerControlEnv::observe(const EnvStatus& status, const Eigen::VectorXd& action) const {
  if (action.size() != 1 || status.size() != 1) {
    throw std::invalid_argument("PowerControlEnv::observe: expected scalar power and gain");
  }
  return Observation{instant_rate_pc(action[0], status[0], config_.noise_power),
                     Eigen::VectorXd(),
                     Eigen::VectorXd::Constant(1, action[0] - config_.avg_power_budget)};
}

Eigen::VectorXd PowerControlEnv::action_lower() const { return Eigen::VectorXd::Zero(1); }

Eigen::VectorXd PowerControlEnv::action_upper() const {
  return Eigen::VectorXd::Constant(1, config_.max_power);
}

Eigen::VectorXd PowerControlEnv::initial_action() const {
  return Eigen::VectorXd::Constant(1, config_.avg_power_budget);
}

ModelGradients PowerControlEnv::analytic_gradients(const EnvStatus& status,
                                                   const Eigen::VectorXd& action) const {
  if (action.size() != 1 || status.size() != 1) {
    throw std::invalid_argument("PowerControlEnv::analytic_gradients: expected scalars");
  }
  const double snr_per_watt = status[0] / config_.noise_power;
  ModelGradients grads;
  grads.objective =
      Eigen::VectorXd::Constant(1, snr_per_watt / (std::numbers::ln2 * (1.0 + action[0] * snr_per_watt)));
  grads.instant_constraints = Eigen::MatrixXd::Zero(0, 1);
  grads.avg_constraints = Eigen::MatrixXd::Ones(1, 1);
  return grads;
}

}  // namespace pdl
