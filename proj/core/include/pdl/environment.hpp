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

// Observation-only environment interfaces.
//
// These are all a model-free learner gets to see: draw a status, turn it into
// network features, execute an action and read back the objective and
// constraint values. Analytic derivatives live behind AnalyticModel in
// model.hpp, which the model-free trainers never include.

#pragma once

#include <vector>

#include <Eigen/Core>

#include "pdl/random.hpp"

namespace pdl {

// Raw environment status h (linear SNRs, channel gains, ...).
using EnvStatus = Eigen::VectorXd;

// Values observed after executing an action.
//   objective_value       J(x, h), in the environment's reporting unit
//   instant_constraints   g_i(x, h), satisfied iff <= 0
//   avg_constraint_terms  c_j(x, h), constraint is E[c_j] <= 0
struct Observation {
  double objective_value = 0.0;
  Eigen::VectorXd instant_constraints;
  Eigen::VectorXd avg_constraint_terms;

  bool feasible() const {
    return instant_constraints.size() == 0 || instant_constraints.maxCoeff() <= 0.0;
  }
};

// One BS index per user.
using Association = std::vector<int>;

// An environment whose action is one categorical choice per group
// (user association: one BS per user).
class DiscreteEnvironment {
 public:
  virtual ~DiscreteEnvironment() = default;

  virtual EnvStatus sample_status(Rng& rng) const = 0;
  virtual Eigen::VectorXd features(const EnvStatus& status) const = 0;
  virtual Observation observe(const EnvStatus& status, const Association& action) const = 0;

  virtual int num_groups() const = 0;
  virtual int group_size() const = 0;
  virtual int num_instant_constraints() const = 0;
  int feature_size() const { return num_groups() * group_size(); }

  // J is divided by this before it enters the Lagrangian.
  virtual double objective_scale() const = 0;
  // Elementwise lower bound of the instantaneous constraint values.
  virtual Eigen::VectorXd constraint_floor() const = 0;
};

// An environment whose action is a real vector inside a box.
class ContinuousEnvironment {
 public:
  virtual ~ContinuousEnvironment() = default;

  virtual EnvStatus sample_status(Rng& rng) const = 0;
  virtual Eigen::VectorXd features(const EnvStatus& status) const = 0;
  virtual Observation observe(const EnvStatus& status, const Eigen::VectorXd& action) const = 0;

  virtual int action_size() const = 0;
  virtual int feature_size() const = 0;
  virtual int num_avg_constraints() const = 0;
  virtual Eigen::VectorXd action_lower() const = 0;
  virtual Eigen::VectorXd action_upper() const = 0;
  virtual double objective_scale() const = 0;
  // A feasible action to start the policy from.
  virtual Eigen::VectorXd initial_action() const = 0;
};

}  // namespace pdl
