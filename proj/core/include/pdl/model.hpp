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

#pragma once

#include <Eigen/Core>

#include "pdl/environment.hpp"

namespace pdl {

// Closed-form derivatives of the objective and constraint functions with
// respect to the action. Row i of a Jacobian is the gradient of function i.
struct ModelGradients {
  Eigen::VectorXd objective;            // dJ/dx
  Eigen::MatrixXd instant_constraints;  // dg_i/dx
  Eigen::MatrixXd avg_constraints;      // dc_j/dx
};

class AnalyticModel {
 public:
  virtual ~AnalyticModel() = default;
  virtual ModelGradients analytic_gradients(const EnvStatus& status,
                                            const Eigen::VectorXd& action) const = 0;
};

}  // namespace pdl
