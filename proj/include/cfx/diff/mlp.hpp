// Copyright 2026 The cfx Authors
//
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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cfx::diff {

// Two-layer perceptron: out = sigmoid(W2 tanh(W1 x + b1) + b2).
// W1 is hidden x input, W2 is output x hidden, both row-major.
struct TinyMLP {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t output_dim = 0;
  std::vector<double> w1, b1, w2, b2;

  static TinyMLP zeros(std::size_t input, std::size_t hidden, std::size_t output);
  // Glorot-style uniform init.
  static TinyMLP random(std::size_t input, std::size_t hidden, std::size_t output,
                        std::uint64_t seed);

  std::size_t num_parameters() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
};

// Gradients with the same layout as TinyMLP's parameters.
struct MlpGradients {
  std::vector<double> w1, b1, w2, b2;

  static MlpGradients zeros_like(const TinyMLP& net);
  void clear();
};

// Activations kept for the backward pass.
struct MlpCache {
  std::vector<double> input;
  std::vector<double> hidden;  // tanh activations
  std::vector<double> output;  // sigmoid outputs
};

// Throws NumericError on non-finite activations. Zero input entries are
// skipped, so sparse inputs are cheap.
MlpCache mlp_forward(const TinyMLP& net, std::span<const double> input);

// Accumulates parameter gradients of a loss with d loss / d output =
// output_grad into `grads` and returns d loss / d input. Zero output_grad
// rows are skipped.
std::vector<double> mlp_backward(const TinyMLP& net, const MlpCache& cache,
                                 std::span<const double> output_grad,
                                 MlpGradients& grads);

struct MlpPass {
  std::vector<double> output;
  MlpGradients grads;
  std::vector<double> input_grad;
};

MlpPass mlp_forward_backward(const TinyMLP& net, std::span<const double> input,
                             std::span<const double> loss_grad);

// Variant whose output gradient depends on the forward output.
MlpPass mlp_forward_backward(
    const TinyMLP& net, std::span<const double> input,
    const std::function<std::vector<double>(std::span<const double>)>& loss_grad);

// Flat views for optimizers: parameters and gradients in the order
// w1, b1, w2, b2.
std::vector<double> flatten(const TinyMLP& net);
void unflatten(std::span<const double> flat, TinyMLP& net);
std::vector<double> flatten(const MlpGradients& grads);

}  // namespace cfx::diff
