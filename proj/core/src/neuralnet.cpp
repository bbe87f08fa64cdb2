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

#include "pdl/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pdl {

namespace {

void check_size(Eigen::Index actual, int expected, const char* what) {
  if (actual != expected) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

}  // namespace

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("MlpSpec: need at least input and output layer sizes");
  }
  for (int s : layer_sizes) {
    if (s <= 0) throw std::invalid_argument("MlpSpec: layer sizes must be positive");
  }
  if (output_activation.kind() == OutputActivation::Kind::GroupedSoftmax) {
    const int g = output_activation.group_size();
    if (g <= 0 || output_size() % g != 0) {
      throw std::invalid_argument("MlpSpec: softmax group size " + std::to_string(g) +
                                  " does not divide output size " +
                                  std::to_string(output_size()));
    }
  }
}

MlpGradients MlpGradients::zeros_like(const MlpSpec& spec) {
  MlpGradients g;
  g.layers.reserve(spec.num_layers());
  for (int l = 0; l < spec.num_layers(); ++l) {
    g.layers.push_back({Eigen::MatrixXd::Zero(spec.layer_sizes[l + 1], spec.layer_sizes[l]),
                        Eigen::VectorXd::Zero(spec.layer_sizes[l + 1])});
  }
  return g;
}

MlpGradients& MlpGradients::operator+=(const MlpGradients& other) {
  if (other.layers.size() != layers.size()) {
    throw std::invalid_argument("MlpGradients: layer count mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weight += other.layers[l].weight;
    layers[l].bias += other.layers[l].bias;
  }
  return *this;
}

MlpGradients& MlpGradients::operator*=(double scale) {
  for (auto& layer : layers) {
    layer.weight *= scale;
    layer.bias *= scale;
  }
  return *this;
}

bool MlpGradients::all_finite() const {
  return std::all_of(layers.begin(), layers.end(), [](const DenseLayer& l) {
    return l.weight.allFinite() && l.bias.allFinite();
  });
}

double MlpGradients::squared_norm() const {
  double s = 0.0;
  for (const auto& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

Mlp Mlp::init(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  layers.reserve(spec.num_layers());
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int fan_in = spec.layer_sizes[l];
    const int fan_out = spec.layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
    // Column-major fill order is part of the seed contract.
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = dist(rng);
    }
    layers.push_back(std::move(layer));
  }
  return Mlp(spec, std::move(layers));
}

Mlp::Mlp(MlpSpec spec, std::vector<DenseLayer> layers)
    : spec_(std::move(spec)), layers_(std::move(layers)) {
  spec_.validate();
  if (static_cast<int>(layers_.size()) != spec_.num_layers()) {
    throw std::invalid_argument("Mlp: layer count does not match spec");
  }
  for (int l = 0; l < spec_.num_layers(); ++l) {
    const auto& layer = layers_[l];
    if (layer.weight.rows() != spec_.layer_sizes[l + 1] ||
        layer.weight.cols() != spec_.layer_sizes[l] ||
        layer.bias.size() != spec_.layer_sizes[l + 1]) {
      throw std::invalid_argument("Mlp: layer " + std::to_string(l) + " shape mismatch");
    }
  }
  if (!all_finite()) throw std::invalid_argument("Mlp: non-finite parameters");
}

void apply_output_activation(const OutputActivation& act, Eigen::VectorXd& v) {
  switch (act.kind()) {
    case OutputActivation::Kind::Identity:
      return;
    case OutputActivation::Kind::ReLU:
      v = v.cwiseMax(0.0);
      return;
    case OutputActivation::Kind::GroupedSoftmax: {
      const int g = act.group_size();
      for (Eigen::Index start = 0; start < v.size(); start += g) {
        auto seg = v.segment(start, g);
        const double m = seg.maxCoeff();
        seg = (seg.array() - m).exp();
        seg /= seg.sum();
      }
      return;
    }
  }
}

ForwardTrace Mlp::forward(const Eigen::VectorXd& input) const {
  check_size(input.size(), spec_.input_size(), "Mlp::forward input");
  ForwardTrace trace;
  trace.pre_activations.reserve(layers_.size());
  trace.activations.reserve(layers_.size() + 1);
  trace.activations.push_back(input);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd z = layers_[l].weight * trace.activations.back() + layers_[l].bias;
    Eigen::VectorXd a = z;
    if (l + 1 < layers_.size()) {
      a = z.array().tanh();
    } else {
      apply_output_activation(spec_.output_activation, a);
    }
    trace.pre_activations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  return trace;
}

Eigen::VectorXd Mlp::predict(const Eigen::VectorXd& input) const {
  return forward(input).activations.back();
}

namespace detail {

Eigen::VectorXd output_delta(const OutputActivation& act, const Eigen::VectorXd& pre,
                             const Eigen::VectorXd& out, const Eigen::VectorXd& output_grad,
                             SoftmaxJacobian jacobian) {
  switch (act.kind()) {
    case OutputActivation::Kind::Identity:
      return output_grad;
    case OutputActivation::Kind::ReLU:
      return (pre.array() > 0.0).select(output_grad, 0.0);
    case OutputActivation::Kind::GroupedSoftmax: {
      // Per group: J = diag(s) - s s^T, so J^T g = s .* (g - s.g).
      const int g = act.group_size();
      Eigen::VectorXd delta(out.size());
      for (Eigen::Index start = 0; start < out.size(); start += g) {
        const auto s = out.segment(start, g);
        const auto grad = output_grad.segment(start, g);
        if (jacobian == SoftmaxJacobian::Full) {
          delta.segment(start, g) = s.cwiseProduct(grad - Eigen::VectorXd::Constant(g, s.dot(grad)));
        } else {
          delta.segment(start, g) = s.cwiseProduct(grad);
        }
      }
      return delta;
    }
  }
  return output_grad;
}

namespace {

void check_trace(const MlpSpec& spec, const ForwardTrace& trace) {
  if (static_cast<int>(trace.pre_activations.size()) != spec.num_layers() ||
      static_cast<int>(trace.activations.size()) != spec.num_layers() + 1) {
    throw std::invalid_argument("Mlp backward: trace does not match network depth");
  }
}

// dLoss/dz for every layer given dLoss/dz of the output layer.
std::vector<Eigen::VectorXd> propagate_deltas(const Mlp& mlp, const ForwardTrace& trace,
                                              Eigen::VectorXd output_delta) {
  const auto& layers = mlp.layers();
  const int n = mlp.spec().num_layers();
  std::vector<Eigen::VectorXd> deltas(n);
  deltas[n - 1] = std::move(output_delta);
  for (int l = n - 2; l >= 0; --l) {
    const Eigen::VectorXd& a = trace.activations[l + 1];
    deltas[l] = (layers[l + 1].weight.transpose() * deltas[l + 1]).array() *
                (1.0 - a.array().square());
  }
  return deltas;
}

std::vector<Eigen::VectorXd> layer_deltas(const Mlp& mlp, const ForwardTrace& trace,
                                          const Eigen::VectorXd& output_grad,
                                          SoftmaxJacobian jacobian) {
  const auto& spec = mlp.spec();
  check_trace(spec, trace);
  check_size(output_grad.size(), spec.output_size(), "Mlp backward output_grad");
  const int n = spec.num_layers();
  return propagate_deltas(mlp, trace,
                          output_delta(spec.output_activation, trace.pre_activations[n - 1],
                                       trace.activations[n], output_grad, jacobian));
}

MlpGradients gradients_from_deltas(const ForwardTrace& trace,
                                   const std::vector<Eigen::VectorXd>& deltas) {
  MlpGradients grads;
  grads.layers.reserve(deltas.size());
  for (std::size_t l = 0; l < deltas.size(); ++l) {
    grads.layers.push_back({deltas[l] * trace.activations[l].transpose(), deltas[l]});
  }
  return grads;
}

}  // namespace

MlpGradients backward_params(const Mlp& mlp, const ForwardTrace& trace,
                             const Eigen::VectorXd& output_grad, SoftmaxJacobian jacobian) {
  return gradients_from_deltas(trace, layer_deltas(mlp, trace, output_grad, jacobian));
}

}  // namespace detail

MlpGradients Mlp::backward_params(const ForwardTrace& trace,
                                  const Eigen::VectorXd& output_grad) const {
  return detail::backward_params(*this, trace, output_grad, detail::SoftmaxJacobian::Full);
}

MlpGradients Mlp::backward_params_preactivation(const ForwardTrace& trace,
                                                const Eigen::VectorXd& preactivation_grad) const {
  detail::check_trace(spec_, trace);
  check_size(preactivation_grad.size(), spec_.output_size(), "Mlp backward preactivation_grad");
  return detail::gradients_from_deltas(trace,
                                       detail::propagate_deltas(*this, trace, preactivation_grad));
}

Eigen::VectorXd Mlp::backward_input(const ForwardTrace& trace,
                                    const Eigen::VectorXd& output_grad) const {
  const auto deltas =
      detail::layer_deltas(*this, trace, output_grad, detail::SoftmaxJacobian::Full);
  return layers_.front().weight.transpose() * deltas.front();
}

void Mlp::sgd_step(const MlpGradients& gradients, double lr, Direction direction) {
  if (gradients.layers.size() != layers_.size()) {
    throw std::invalid_argument("Mlp::sgd_step: gradient layer count mismatch");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (gradients.layers[l].weight.rows() != layers_[l].weight.rows() ||
        gradients.layers[l].weight.cols() != layers_[l].weight.cols() ||
        gradients.layers[l].bias.size() != layers_[l].bias.size()) {
      throw std::invalid_argument("Mlp::sgd_step: gradient shape mismatch at layer " +
                                  std::to_string(l));
    }
  }
  if (!gradients.all_finite()) {
    throw DivergenceError("Mlp::sgd_step: non-finite gradient");
  }
  const double step = direction == Direction::Ascent ? lr : -lr;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].weight += step * gradients.layers[l].weight;
    layers_[l].bias += step * gradients.layers[l].bias;
  }
}

std::size_t Mlp::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

bool Mlp::all_finite() const {
  return std::all_of(layers_.begin(), layers_.end(), [](const DenseLayer& l) {
    return l.weight.allFinite() && l.bias.allFinite();
  });
}

double Mlp::max_abs_parameter() const {
  double m = 0.0;
  for (const auto& l : layers_) {
    m = std::max({m, l.weight.cwiseAbs().maxCoeff(), l.bias.cwiseAbs().maxCoeff()});
  }
  return m;
}

bool operator==(const Mlp& a, const Mlp& b) {
  if (!(a.spec_ == b.spec_)) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    if (a.layers_[l].weight != b.layers_[l].weight) return false;
    if (a.layers_[l].bias != b.layers_[l].bias) return false;
  }
  return true;
}

double LrSchedule::at(long t) const { return lr_schedule(base, decay, t); }

double lr_schedule(double base, double decay, long t) {
  return base / (1.0 + decay * static_cast<double>(t));
}

}  // namespace pdl
