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

// Reference computations used by the tests. None of these call into the code
// paths they are used to check.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "pdl/neuralnet.hpp"
#include "pdl/trainers.hpp"
#include "pdl/user_assoc.hpp"

namespace pdl::testing {

// Parameters in the order weights (column-major) then bias, layer by layer.
Eigen::VectorXd flatten(const MlpGradients& grads);

// Plain forward pass written out from the layer definitions.
Eigen::VectorXd reference_forward(const Mlp& net, const Eigen::VectorXd& x);

// Central differences of w . f(x) with respect to every parameter / input.
Eigen::VectorXd fd_param_gradient(const Mlp& net, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& w, double eps = 1e-5);
Eigen::VectorXd fd_input_gradient(const Mlp& net, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& w, double eps = 1e-5);

// |a - b| / max(|a|, |b|) in the 2-norm, with a floor on the denominator.
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct BruteForceAssociation {
  std::vector<int> association;
  double rate = -1.0;  // -1 when nothing is feasible
};

// Recursive enumeration with its own rate and load bookkeeping. Ties keep the
// first assignment found in lexicographic order.
BruteForceAssociation brute_force_association(const Eigen::MatrixXd& snr_linear, int capacity,
                                              double bandwidth);

// Exact empirical water-filling by sorting: the active set is the m largest
// gains for the m that makes the level consistent. Returns nu.
double sorted_waterfilling_level(std::span<const double> gains, double budget, double noise);

// Water level of the Exp(mean) population, from
// E[max(0, 1/nu - noise/g)] = budget solved with the exponential integral.
double exponential_waterfilling_level(double mean_gain, double budget, double noise);

// Kolmogorov-Smirnov statistic of samples against U(lo, hi).
double ks_uniform_statistic(std::vector<double> samples, double lo, double hi);

// Exact E_x[score estimator] over all B^K associations at one status, and the
// gradient of E_x[L] from dE/dpi, for fixed multipliers.
struct EnumeratedGradients {
  Eigen::VectorXd estimator_mean;
  Eigen::VectorXd exact;
};
EnumeratedGradients enumerate_score_gradient(const Mlp& policy, const UserAssocEnv& env,
                                             const EnvStatus& status,
                                             const Eigen::VectorXd& multipliers, double baseline);

}  // namespace pdl::testing
