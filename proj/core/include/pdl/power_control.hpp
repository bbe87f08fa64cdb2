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

// Single-link power control over a fading channel.
//
//   maximize   E_g[ log2(1 + p(g) g / noise) ]
//   subject to E_g[ p(g) ] <= budget,  0 <= p(g) <= max_power
//
// with g exponentially distributed (Rayleigh fading power). The optimum is
// water-filling, p(g) = max(0, 1/nu - noise/g).

#pragma once

#include <span>

#include <Eigen/Core>

#include "pdl/environment.hpp"
#include "pdl/model.hpp"
#include "pdl/random.hpp"

namespace pdl {

struct PowerControlConfig {
  double avg_power_budget = 1.0;   // W
  double mean_channel_gain = 1.0;
  double noise_power = 1.0;        // W
  double max_power = 4.0;          // W, upper end of the action box

  void validate() const;
};

double sample_gain_pc(const PowerControlConfig& config, Rng& rng);

// log2(1 + p g / noise) in bit/s/Hz. Throws on negative power.
double instant_rate_pc(double power, double gain, double noise);

struct WaterfillingSolution {
  double level = 0.0;  // nu; the water level is 1/nu
  double noise = 1.0;

  double power(double gain) const;
};

// Finds nu by bisection on the water level so that the empirical mean power
// over `gains` equals `budget`, then polishes it with the closed form on the
// resulting active set. Throws std::runtime_error if the bracket is invalid.
WaterfillingSolution waterfilling_oracle(std::span<const double> gains, double budget,
                                         double noise);

class PowerControlEnv : public ContinuousEnvironment, public AnalyticModel {
 public:
  explicit PowerControlEnv(PowerControlConfig config);

  const PowerControlConfig& config() const { return config_; }

  EnvStatus sample_status(Rng& rng) const override;
  // g / mean_channel_gain.
  Eigen::VectorXd features(const EnvStatus& status) const override;
  // (rate, no instantaneous constraints, p - budget).
  Observation observe(const EnvStatus& status, const Eigen::VectorXd& action) const override;

  int action_size() const override { return 1; }
  int feature_size() const override { return 1; }
  int num_avg_constraints() const override { return 1; }
  Eigen::VectorXd action_lower() const override;
  Eigen::VectorXd action_upper() const override;
  double objective_scale() const override { return 1.0; }
  Eigen::VectorXd initial_action() const override;

  ModelGradients analytic_gradients(const EnvStatus& status,
                                    const Eigen::VectorXd& action) const override;

 private:
  PowerControlConfig config_;
};

}  // namespace pdl
