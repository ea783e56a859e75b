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

#include "cfx/diff/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "cfx/common.hpp"
#include "cfx/simd/kernels.hpp"

namespace cfx::diff {

TinyMLP TinyMLP::zeros(std::size_t input, std::size_t hidden, std::size_t output) {
  TinyMLP net;
  net.input_dim = input;
  net.hidden_dim = hidden;
  net.output_dim = output;
  net.w1.assign(hidden * input, 0.0);
  net.b1.assign(hidden, 0.0);
  net.w2.assign(output * hidden, 0.0);
  net.b2.assign(output, 0.0);
  return net;
}

TinyMLP TinyMLP::random(std::size_t input, std::size_t hidden,
                        std::size_t output, std::uint64_t seed) {
  TinyMLP net = zeros(input, hidden, output);
  Rng rng(seed);
  const double r1 = std::sqrt(6.0 / static_cast<double>(input + hidden));
  const double r2 = std::sqrt(6.0 / static_cast<double>(hidden + output));
  for (auto& x : net.w1) x = r1 * (2.0 * rng.uniform() - 1.0);
  for (auto& x : net.w2) x = r2 * (2.0 * rng.uniform() - 1.0);
  return net;
}

MlpGradients MlpGradients::zeros_like(const TinyMLP& net) {
  MlpGradients g;
  g.w1.assign(net.w1.size(), 0.0);
  g.b1.assign(net.b1.size(), 0.0);
  g.w2.assign(net.w2.size(), 0.0);
  g.b2.assign(net.b2.size(), 0.0);
  return g;
}

void MlpGradients::clear() {
  std::fill(w1.begin(), w1.end(), 0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
  std::fill(w2.begin(), w2.end(), 0.0);
  std::fill(b2.begin(), b2.end(), 0.0);
}

MlpCache mlp_forward(const TinyMLP& net, std::span<const double> input) {
  if (input.size() != net.input_dim) throw DomainError("MLP input has the wrong size");
  const std::size_t h = net.hidden_dim;
  const auto& k = simd::kernels();
  MlpCache cache;
  cache.input.assign(input.begin(), input.end());
  // Accumulated column by column so zero inputs cost nothing.
  std::vector<double> pre(net.b1);
  for (std::size_t c = 0; c < net.input_dim; ++c) {
    const double x = input[c];
    if (x == 0.0) continue;
    for (std::size_t r = 0; r < h; ++r) pre[r] += net.w1[r * net.input_dim + c] * x;
  }
  cache.hidden.resize(h);
  for (std::size_t r = 0; r < h; ++r) cache.hidden[r] = std::tanh(pre[r]);
  cache.output.resize(net.output_dim);
  k.gemv(net.w2.data(), cache.hidden.data(), net.b2.data(), cache.output.data(),
         net.output_dim, h);
  for (auto& z : cache.output) {
    if (!std::isfinite(z)) throw NumericError("non-finite MLP activation");
    z = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  }
  for (double a : cache.hidden) {
    if (!std::isfinite(a)) throw NumericError("non-finite MLP activation");
  }
  return cache;
}

std::vector<double> mlp_backward(const TinyMLP& net, const MlpCache& cache,
                                 std::span<const double> output_grad,
                                 MlpGradients& grads) {
  if (output_grad.size() != net.output_dim) {
    throw DomainError("MLP output gradient has the wrong size");
  }
  const std::size_t h = net.hidden_dim;
  const auto& k = simd::kernels();
  std::vector<double> dhidden(h, 0.0);
  for (std::size_t o = 0; o < net.output_dim; ++o) {
    if (output_grad[o] == 0.0) continue;
    const double y = cache.output[o];
    const double dz = output_grad[o] * y * (1.0 - y);
    grads.b2[o] += dz;
    k.axpy(dz, cache.hidden.data(), grads.w2.data() + o * h, h);
    k.axpy(dz, net.w2.data() + o * h, dhidden.data(), h);
  }
  std::vector<double> dpre(h);
  for (std::size_t r = 0; r < h; ++r) {
    const double a = cache.hidden[r];
    dpre[r] = dhidden[r] * (1.0 - a * a);
    grads.b1[r] += dpre[r];
  }
  std::vector<double> dinput(net.input_dim, 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    if (dpre[r] == 0.0) continue;
    const double* wrow = net.w1.data() + r * net.input_dim;
    double* grow = grads.w1.data() + r * net.input_dim;
    for (std::size_t c = 0; c < net.input_dim; ++c) {
      const double x = cache.input[c];
      if (x != 0.0) grow[c] += dpre[r] * x;
    }
    k.axpy(dpre[r], wrow, dinput.data(), net.input_dim);
  }
  return dinput;
}

MlpPass mlp_forward_backward(const TinyMLP& net, std::span<const double> input,
                             std::span<const double> loss_grad) {
  MlpPass pass;
  const MlpCache cache = mlp_forward(net, input);
  pass.grads = MlpGradients::zeros_like(net);
  pass.input_grad = mlp_backward(net, cache, loss_grad, pass.grads);
  pass.output = cache.output;
  return pass;
}

MlpPass mlp_forward_backward(
    const TinyMLP& net, std::span<const double> input,
    const std::function<std::vector<double>(std::span<const double>)>& loss_grad) {
  MlpPass pass;
  const MlpCache cache = mlp_forward(net, input);
  const auto g = loss_grad(cache.output);
  pass.grads = MlpGradients::zeros_like(net);
  pass.input_grad = mlp_backward(net, cache, g, pass.grads);
  pass.output = cache.output;
  return pass;
}

std::vector<double> flatten(const TinyMLP& net) {
  std::vector<double> flat;
  flat.reserve(net.num_parameters());
  flat.insert(flat.end(), net.w1.begin(), net.w1.end());
  flat.insert(flat.end(), net.b1.begin(), net.b1.end());
  flat.insert(flat.end(), net.w2.begin(), net.w2.end());
  flat.insert(flat.end(), net.b2.begin(), net.b2.end());
  return flat;
}

void unflatten(std::span<const double> flat, TinyMLP& net) {
  if (flat.size() != net.num_parameters()) throw DomainError("flat parameter size mismatch");
  auto it = flat.begin();
  for (auto* v : {&net.w1, &net.b1, &net.w2, &net.b2}) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
    it += static_cast<std::ptrdiff_t>(v->size());
  }
}

std::vector<double> flatten(const MlpGradients& grads) {
  std::vector<double> flat;
  flat.reserve(grads.w1.size() + grads.b1.size() + grads.w2.size() + grads.b2.size());
  flat.insert(flat.end(), grads.w1.begin(), grads.w1.end());
  flat.insert(flat.end(), grads.b1.begin(), grads.b1.end());
  flat.insert(flat.end(), grads.w2.begin(), grads.w2.end());
  flat.insert(flat.end(), grads.b2.begin(), grads.b2.end());
  return flat;
}

}  // namespace cfx::diff
