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

#include "pdl/user_assoc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdl {

namespace {

constexpr double kMaxEnumeration = 1e6;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

void UserAssocConfig::validate() const {
  if (num_bs < 1) throw std::invalid_argument("num_bs must be >= 1");
  if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
  if (capacity < 0) throw std::invalid_argument("capacity must be >= 0");
  if (static_cast<long>(num_bs) * capacity < num_users) {
    throw std::invalid_argument("capacity: num_bs * capacity (" +
                                std::to_string(num_bs * capacity) + ") < num_users (" +
                                std::to_string(num_users) + "), problem infeasible");
  }
  if (!(inter_bs_distance > 0.0)) throw std::invalid_argument("inter_bs_distance must be > 0");
  if (!(bs_road_offset > 0.0)) throw std::invalid_argument("bs_road_offset must be > 0");
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx_power must be > 0");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  if (!std::isfinite(noise_figure_db)) throw std::invalid_argument("noise_figure_db must be finite");
  if (!std::isfinite(noise_psd_dbm_hz)) {
    throw std::invalid_argument("noise_psd_dbm_hz must be finite");
  }
}

SnrMatrix::SnrMatrix(Eigen::MatrixXd linear) : linear_(std::move(linear)) {
  if (!linear_.allFinite() || (linear_.array() <= 0.0).any()) {
    throw std::invalid_argument("SnrMatrix: entries must be finite and positive");
  }
}

SnrMatrix SnrMatrix::from_status(const EnvStatus& status, int num_users, int num_bs) {
  if (status.size() != static_cast<Eigen::Index>(num_users) * num_bs) {
    throw std::invalid_argument("SnrMatrix: status length does not match K x B");
  }
  Eigen::MatrixXd m(num_users, num_bs);
  for (int k = 0; k < num_users; ++k) {
    for (int b = 0; b < num_bs; ++b) m(k, b) = status[k * num_bs + b];
  }
  return SnrMatrix(std::move(m));
}

Eigen::MatrixXd SnrMatrix::db() const { return 10.0 * linear_.array().log10(); }

EnvStatus SnrMatrix::to_status() const {
  EnvStatus s(linear_.size());
  const int B = num_bs();
  for (int k = 0; k < num_users(); ++k) {
    for (int b = 0; b < B; ++b) s[k * B + b] = linear_(k, b);
  }
  return s;
}

double path_loss_db(double distance_m) {
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

double noise_power_dbm(const UserAssocConfig& config) {
  return config.noise_psd_dbm_hz + 10.0 * std::log10(config.bandwidth) + config.noise_figure_db;
}

double snr_db_at_distance(const UserAssocConfig& config, double distance_m) {
  return watts_to_dbm(config.tx_power) - path_loss_db(distance_m) - noise_power_dbm(config);
}

double bs_road_position(const UserAssocConfig& config, int bs) {
  return bs * config.inter_bs_distance;
}

double user_bs_distance(const UserAssocConfig& config, double user_position, int bs) {
  return std::hypot(user_position - bs_road_position(config, bs), config.bs_road_offset);
}

std::vector<double> sample_user_positions(const UserAssocConfig& config, Rng& rng) {
  // A single BS has a degenerate road; users then sit under it.
  std::uniform_real_distribution<double> pos(0.0, config.road_length());
  std::vector<double> positions(config.num_users);
  for (auto& p : positions) p = config.num_bs > 1 ? pos(rng) : 0.0;
  return positions;
}

SnrMatrix snr_from_positions(const UserAssocConfig& config, const std::vector<double>& positions) {
  Eigen::MatrixXd snr(static_cast<Eigen::Index>(positions.size()), config.num_bs);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    for (int b = 0; b < config.num_bs; ++b) {
      const double d = user_bs_distance(config, positions[k], b);
      snr(static_cast<Eigen::Index>(k), b) = db_to_linear(snr_db_at_distance(config, d));
    }
  }
  return SnrMatrix(std::move(snr));
}

SnrMatrix sample_status_ua(const UserAssocConfig& config, Rng& rng) {
  const auto positions = sample_user_positions(config, rng);
  if (!config.rayleigh_fading) return snr_from_positions(config, positions);
  Eigen::MatrixXd snr = snr_from_positions(config, positions).linear();
  std::exponential_distribution<double> fading(1.0);
  for (Eigen::Index k = 0; k < snr.rows(); ++k) {
    for (Eigen::Index b = 0; b < snr.cols(); ++b) {
      // Guard against an exact zero draw, which would leave the link unusable.
      snr(k, b) *= std::max(fading(rng), 1e-300);
    }
  }
  return SnrMatrix(std::move(snr));
}

void validate_association(const Association& assoc, int num_users, int num_bs) {
  if (static_cast<int>(assoc.size()) != num_users) {
    throw std::invalid_argument("association: expected " + std::to_string(num_users) +
                                " users, got " + std::to_string(assoc.size()));
  }
  for (int b : assoc) {
    if (b < 0 || b >= num_bs) {
      throw std::invalid_argument("association: BS index " + std::to_string(b) +
                                  " out of range");
    }
  }
}

double sum_rate(const Association& assoc, const SnrMatrix& snr, double bandwidth) {
  validate_association(assoc, snr.num_users(), snr.num_bs());
  double rate = 0.0;
  for (int k = 0; k < snr.num_users(); ++k) {
    rate += bandwidth * std::log2(1.0 + snr(k, assoc[k]));
  }
  return rate;
}

Eigen::VectorXd capacity_violation(const Association& assoc, const UserAssocConfig& config) {
  validate_association(assoc, config.num_users, config.num_bs);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(config.num_bs, -config.capacity);
  for (int b : assoc) g[b] += 1.0;
  return g;
}

AssociationOracleResult exhaustive_oracle(const SnrMatrix& snr, const UserAssocConfig& config) {
  const int K = snr.num_users();
  const int B = snr.num_bs();
  if (std::pow(static_cast<double>(B), K) > kMaxEnumeration) {
    throw std::invalid_argument("exhaustive_oracle: B^K exceeds 1e6 assignments");
  }
  // Per-link rates once; summing in user order keeps ties exact.
  Eigen::MatrixXd rates(K, B);
  for (int k = 0; k < K; ++k) {
    for (int b = 0; b < B; ++b) rates(k, b) = config.bandwidth * std::log2(1.0 + snr(k, b));
  }

  Association current(K, 0);
  std::vector<int> load(B, 0);
  load[0] = K;
  AssociationOracleResult best;
  bool found = false;
  // Odometer over choice vectors in lexicographic order (user 0 most significant).
  while (true) {
    bool feasible = true;
    for (int b = 0; b < B; ++b) feasible = feasible && load[b] <= config.capacity;
    if (feasible) {
      double rate = 0.0;
      for (int k = 0; k < K; ++k) rate += rates(k, current[k]);
      if (!found || rate > best.rate) {
        best.association = current;
        best.rate = rate;
        found = true;
      }
    }
    int pos = K - 1;
    while (pos >= 0 && current[pos] == B - 1) {
      --load[current[pos]];
      current[pos] = 0;
      ++load[0];
      --pos;
    }
    if (pos < 0) break;
    --load[current[pos]];
    ++current[pos];
    ++load[current[pos]];
  }
  if (!found) throw std::runtime_error("exhaustive_oracle: no feasible association");
  return best;
}

UserAssocEnv::UserAssocEnv(UserAssocConfig config) : config_(std::move(config)) {
  config_.validate();
}

EnvStatus UserAssocEnv::sample_status(Rng& rng) const {
  return sample_status_ua(config_, rng).to_status();
}

Eigen::VectorXd UserAssocEnv::features(const EnvStatus& status) const {
  return ((10.0 * status.array().log10()) - kSnrFeatureOffsetDb) / kSnrFeatureScaleDb;
}

Observation UserAssocEnv::observe(const EnvStatus& status, const Association& action) const {
  const auto snr = SnrMatrix::from_status(status, config_.num_users, config_.num_bs);
  return Observation{sum_rate(action, snr, config_.bandwidth),
                     capacity_violation(action, config_), Eigen::VectorXd()};
}

double UserAssocEnv::objective_scale() const { return config_.bandwidth * config_.num_users; }

Eigen::VectorXd UserAssocEnv::constraint_floor() const {
  return Eigen::VectorXd::Constant(config_.num_bs, -config_.capacity);
}

AssociationOracleResult UserAssocEnv::oracle(const EnvStatus& status) const {
  return exhaustive_oracle(SnrMatrix::from_status(status, config_.num_users, config_.num_bs),
                           config_);
}

UserAssocRelaxedModel::UserAssocRelaxedModel(UserAssocConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

double UserAssocRelaxedModel::expected_rate(const EnvStatus& status,
                                            const Eigen::VectorXd& probs) const {
  double r = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    r += probs[i] * config_.bandwidth * std::log2(1.0 + status[i]);
  }
  return r;
}

Eigen::VectorXd UserAssocRelaxedModel::expected_violation(const Eigen::VectorXd& probs) const {
  const int B = config_.num_bs;
  Eigen::VectorXd g = Eigen::VectorXd::Constant(B, -config_.capacity);
  for (Eigen::Index i = 0; i < probs.size(); ++i) g[i % B] += probs[i];
  return g;
}

ModelGradients UserAssocRelaxedModel::analytic_gradients(const EnvStatus& status,
                                                         const Eigen::VectorXd& probs) const {
  const int K = config_.num_users;
  const int B = config_.num_bs;
  if (probs.size() != static_cast<Eigen::Index>(K) * B || status.size() != probs.size()) {
    throw std::invalid_argument("UserAssocRelaxedModel: expected K*B probabilities");
  }
  ModelGradients grads;
  grads.objective = config_.bandwidth * (1.0 + status.array()).log() / std::log(2.0);
  grads.instant_constraints = Eigen::MatrixXd::Zero(B, K * B);
  for (int k = 0; k < K; ++k) {
    for (int b = 0; b < B; ++b) grads.instant_constraints(b, k * B + b) = 1.0;
  }
  grads.avg_constraints = Eigen::MatrixXd::Zero(0, K * B);
  return grads;
}

}  // namespace pdl
