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

// Small fully connected networks with exact reverse-mode gradients.
//
// An Mlp maps an input vector through tanh hidden layers to an output layer
// whose activation is one of
//   * Identity
//   * ReLU               (non-negative outputs, used for multipliers/values)
//   * GroupedSoftmax(s)  (consecutive groups of s outputs each form a
//                         probability distribution, used for policies)
//
// Gradients are available with respect to the parameters (for SGD) and with
// respect to the input (to chain a value network's gradient into a policy).
// Both compute d(output_grad . output)/d(.) for a caller-supplied output_grad.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pdl {

enum class HiddenActivation { Tanh };

class OutputActivation {
 public:
  enum class Kind { Identity, ReLU, GroupedSoftmax };

  static OutputActivation Identity() { return OutputActivation(Kind::Identity, 0); }
  static OutputActivation ReLU() { return OutputActivation(Kind::ReLU, 0); }
  static OutputActivation GroupedSoftmax(int group_size) {
    return OutputActivation(Kind::GroupedSoftmax, group_size);
  }

  Kind kind() const { return kind_; }
  int group_size() const { return group_size_; }

  friend bool operator==(const OutputActivation&, const OutputActivation&) = default;

 private:
  OutputActivation(Kind kind, int group_size) : kind_(kind), group_size_(group_size) {}

  Kind kind_;
  int group_size_;
};

struct MlpSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output
  HiddenActivation hidden_activation = HiddenActivation::Tanh;
  OutputActivation output_activation = OutputActivation::Identity();

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

  // Throws std::invalid_argument when the spec cannot describe a network.
  void validate() const;

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

// Thrown when training produces non-finite or runaway parameters.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Parameter-shaped container; also used for gradients.
struct MlpGradients {
  std::vector<DenseLayer> layers;

  static MlpGradients zeros_like(const MlpSpec& spec);

  MlpGradients& operator+=(const MlpGradients& other);
  MlpGradients& operator*=(double scale);
  bool all_finite() const;
  double squared_norm() const;
};

// Values cached during a forward pass. activations[0] is the input and
// activations[l + 1] is the output of layer l; pre_activations[l] is the
// affine output of layer l before its nonlinearity.
struct ForwardTrace {
  std::vector<Eigen::VectorXd> pre_activations;
  std::vector<Eigen::VectorXd> activations;

  const Eigen::VectorXd& output() const { return activations.back(); }
};

enum class Direction { Ascent, Descent };

class Mlp {
 public:
  // Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
  static Mlp init(const MlpSpec& spec, std::uint64_t seed);

  // Takes explicit parameters; shapes are checked against the spec.
  Mlp(MlpSpec spec, std::vector<DenseLayer> layers);

  const MlpSpec& spec() const { return spec_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  ForwardTrace forward(const Eigen::VectorXd& input) const;
  Eigen::VectorXd predict(const Eigen::VectorXd& input) const;

  MlpGradients backward_params(const ForwardTrace& trace,
                               const Eigen::VectorXd& output_grad) const;
  Eigen::VectorXd backward_input(const ForwardTrace& trace,
                                 const Eigen::VectorXd& output_grad) const;
  // Parameter gradients given d(.)/d(pre-activation) of the output layer,
  // bypassing the output activation.
  MlpGradients backward_params_preactivation(const ForwardTrace& trace,
                                             const Eigen::VectorXd& preactivation_grad) const;

  // theta <- theta +/- lr * grad. Throws DivergenceError if the gradient is
  // non-finite, leaving the network untouched.
  void sgd_step(const MlpGradients& gradients, double lr, Direction direction);

  std::size_t num_parameters() const;
  bool all_finite() const;
  double max_abs_parameter() const;

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  MlpSpec spec_;
  std::vector<DenseLayer> layers_;
};

inline Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed) { return Mlp::init(spec, seed); }

// Applies the output activation in place.
void apply_output_activation(const OutputActivation& act, Eigen::VectorXd& values);

struct LrSchedule {
  double base = 0.01;
  double decay = 0.001;

  double at(long t) const;
};

// base / (1 + decay * t).
double lr_schedule(double base, double decay, long t);

namespace detail {

// Selects how the grouped-softmax Jacobian is applied in the backward pass.
// Only the full Jacobian is correct; the diagonal variant exists so that the
// gradient checks can be shown to catch a corrupted Jacobian.
enum class SoftmaxJacobian { Full, DiagonalOnly };

Eigen::VectorXd output_delta(const OutputActivation& act, const Eigen::VectorXd& pre,
                             const Eigen::VectorXd& out, const Eigen::VectorXd& output_grad,
                             SoftmaxJacobian jacobian = SoftmaxJacobian::Full);

MlpGradients backward_params(const Mlp& mlp, const ForwardTrace& trace,
                             const Eigen::VectorXd& output_grad, SoftmaxJacobian jacobian);

}  // namespace detail

}  // namespace pdl
