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

// User association on a road served by a row of base stations.
//
// Geometry: BS b sits bs_road_offset meters off the road, above road
// coordinate b * inter_bs_distance. Users are uniform on the road segment
// spanned by the BS projections. Link SNR follows the macro-cell path loss
//   PL(d) [dB] = 128.1 + 37.6 log10(d / 1 km)
// against thermal noise psd + 10 log10(bandwidth) + noise figure. There is no
// interference, so a user's rate depends only on its own link.
//
// Action: one BS per user. Constraint: at most `capacity` users per BS,
// expressed as g_b = load_b - capacity <= 0.

#pragma once

#include <vector>

#include <Eigen/Core>

#include "pdl/environment.hpp"
#include "pdl/model.hpp"
#include "pdl/random.hpp"

namespace pdl {

struct UserAssocConfig {
  int num_bs = 2;
  int num_users = 3;
  int capacity = 2;
  double inter_bs_distance = 500.0;  // m
  double bs_road_offset = 100.0;     // m
  double tx_power = 20.0;            // W
  double bandwidth = 1e7;            // Hz
  double noise_figure_db = 0.0;
  double noise_psd_dbm_hz = -174.0;
  bool rayleigh_fading = false;

  void validate() const;
  double road_length() const { return (num_bs - 1) * inter_bs_distance; }
};

// K x B matrix of linear SNRs, user-major.
class SnrMatrix {
 public:
  explicit SnrMatrix(Eigen::MatrixXd linear);
  static SnrMatrix from_status(const EnvStatus& status, int num_users, int num_bs);

  int num_users() const { return static_cast<int>(linear_.rows()); }
  int num_bs() const { return static_cast<int>(linear_.cols()); }
  double operator()(int user, int bs) const { return linear_(user, bs); }
  const Eigen::MatrixXd& linear() const { return linear_; }
  Eigen::MatrixXd db() const;
  // Row-major flattening: entry (k, b) lands at k * B + b.
  EnvStatus to_status() const;

 private:
  Eigen::MatrixXd linear_;
};

double path_loss_db(double distance_m);
double noise_power_dbm(const UserAssocConfig& config);
double watts_to_dbm(double watts);
double snr_db_at_distance(const UserAssocConfig& config, double distance_m);
double bs_road_position(const UserAssocConfig& config, int bs);
double user_bs_distance(const UserAssocConfig& config, double user_position, int bs);

std::vector<double> sample_user_positions(const UserAssocConfig& config, Rng& rng);
SnrMatrix snr_from_positions(const UserAssocConfig& config, const std::vector<double>& positions);

// Draws positions (and fading, when enabled) and returns the link SNRs.
SnrMatrix sample_status_ua(const UserAssocConfig& config, Rng& rng);

// Sum over users of bandwidth * log2(1 + SNR of the chosen link), in bit/s.
double sum_rate(const Association& assoc, const SnrMatrix& snr, double bandwidth);

// g_b = (users on b) - capacity.
Eigen::VectorXd capacity_violation(const Association& assoc, const UserAssocConfig& config);

void validate_association(const Association& assoc, int num_users, int num_bs);

struct AssociationOracleResult {
  Association association;
  double rate = 0.0;
};

// Brute force over all B^K associations; throws if B^K exceeds 1e6 or if
// nothing is feasible. Ties go to the lexicographically smallest choice.
AssociationOracleResult exhaustive_oracle(const SnrMatrix& snr, const UserAssocConfig& config);

inline constexpr double kSnrFeatureOffsetDb = 50.0;
inline constexpr double kSnrFeatureScaleDb = 10.0;

class UserAssocEnv : public DiscreteEnvironment {
 public:
  explicit UserAssocEnv(UserAssocConfig config);

  const UserAssocConfig& config() const { return config_; }

  EnvStatus sample_status(Rng& rng) const override;
  // (SNR_dB - 50) / 10 for every link.
  Eigen::VectorXd features(const EnvStatus& status) const override;
  Observation observe(const EnvStatus& status, const Association& action) const override;

  int num_groups() const override { return config_.num_users; }
  int group_size() const override { return config_.num_bs; }
  int num_instant_constraints() const override { return config_.num_bs; }
  // bandwidth * K, so the normalized objective is the mean spectral efficiency.
  double objective_scale() const override;
  Eigen::VectorXd constraint_floor() const override;

  AssociationOracleResult oracle(const EnvStatus& status) const;

 private:
  UserAssocConfig config_;
};

// The association problem relaxed to per-link probabilities x[k * B + b]:
// expected rate sum_k,b x_kb W log2(1 + SNR_kb) and expected load
// sum_k x_kb - N. Used to cross-check gradient plumbing.
class UserAssocRelaxedModel : public AnalyticModel {
 public:
  explicit UserAssocRelaxedModel(UserAssocConfig config);

  double expected_rate(const EnvStatus& status, const Eigen::VectorXd& probs) const;
  Eigen::VectorXd expected_violation(const Eigen::VectorXd& probs) const;

  ModelGradients analytic_gradients(const EnvStatus& status,
                                    const Eigen::VectorXd& probs) const override;

 private:
  UserAssocConfig config_;
};

}  // namespace pdl
