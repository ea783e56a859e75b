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

#include "cfx/diff/gradients.hpp"

#include <cmath>

#include "cfx/simd/kernels.hpp"

namespace cfx::diff {

namespace {

void check_weights(std::span<const ItemId> history,
                   std::span<const double> weights) {
  if (history.size() != weights.size()) {
    throw DomainError("history and weight lengths differ");
  }
}

}  // namespace

double score_mf_weighted(const rec::MFModel& model,
                         std::span<const ItemId> history,
                         std::span<const double> weights, ItemId item) {
  check_weights(history, weights);
  const std::size_t d = model.dim();
  const auto& k = simd::kernels();
  const auto qi = model.item_embedding(item);
  double total = 0.0, acc = 0.0;
  for (std::size_t j = 0; j < history.size(); ++j) {
    if (weights[j] == 0.0) continue;
    total += weights[j];
    acc += weights[j] * k.dot(model.item_embedding(history[j]).data(), qi.data(), d);
  }
  if (total == 0.0) return model.item_bias(item);
  return acc / total + model.item_bias(item);
}

std::vector<double> grad_score_wrt_user_vector(const rec::MFModel& model,
                                               std::span<const ItemId> history,
                                               std::span<const double> weights,
                                               ItemId item) {
  check_weights(history, weights);
  const std::size_t d = model.dim();
  const auto& k = simd::kernels();
  const auto qi = model.item_embedding(item);
  std::vector<double> contrib(history.size());
  double total = 0.0, acc = 0.0;
  for (std::size_t j = 0; j < history.size(); ++j) {
    contrib[j] = k.dot(model.item_embedding(history[j]).data(), qi.data(), d);
    total += weights[j];
    acc += weights[j] * contrib[j];
  }
  std::vector<double> grad(history.size(), 0.0);
  if (total == 0.0) return grad;
  const double mean = acc / total;
  for (std::size_t j = 0; j < history.size(); ++j) {
    grad[j] = (contrib[j] - mean) / total;
  }
  return grad;
}

std::vector<double> grad_score_wrt_user_vector(const rec::MFModel& model,
                                               std::span<const ItemId> history,
                                               ItemId item) {
  const std::vector<double> ones(history.size(), 1.0);
  return grad_score_wrt_user_vector(model, history, ones, item);
}

MaskGradient grad_scores_wrt_edge_mask(
    const rec::LightGCNModel& model, std::span<const double> mask, UserId user,
    std::span<const std::pair<ItemId, double>> weighted_items) {
  const auto& g = model.graph();
  const std::size_t n_edges = g.num_interactions();
  if (!mask.empty() && mask.size() != n_edges) {
    throw DomainError("edge mask length does not match the graph");
  }
  const auto prop = model.propagate(mask);
  const std::size_t d = model.dim();
  const std::size_t nu = g.num_users();
  const std::size_t layers = model.layers();
  const auto& k = simd::kernels();
  const auto& norm = model.normalization();

  // Seed: d S / d final.
  rec::NodeEmbeddings seed{nu, g.num_items(), d,
                           std::vector<double>(prop.final.values.size(), 0.0)};
  {
    auto su = seed.node(user);
    const auto fu = prop.final.user(user);
    for (const auto& [item, coef] : weighted_items) {
      k.axpy(coef, prop.final.item(item).data(), su.data(), d);
      k.axpy(coef, fu.data(), seed.node(nu + item).data(), d);
    }
  }
  const double inv = 1.0 / static_cast<double>(layers + 1);
  k.scale(inv, seed.values.data(), seed.values.data(), seed.values.size());

  // adjoint holds d S / d E^(l+1); walk l from L-1 down to 0.
  MaskGradient out;
  out.entries.assign(n_edges, 0.0);
  rec::NodeEmbeddings adjoint = seed, next;
  for (std::size_t l = layers; l-- > 0;) {
    const auto& below = prop.layers[l];
    for (EdgeId e = 0; e < n_edges; ++e) {
      const std::size_t u = g.edge_user(e);
      const std::size_t i = nu + g.edge_item(e);
      out.entries[e] += norm[e] * (k.dot(adjoint.node(u).data(), below.node(i).data(), d) +
                                   k.dot(adjoint.node(i).data(), below.node(u).data(), d));
    }
    if (l == 0) break;
    rec::propagate_layer(g, norm, mask, adjoint, next);
    k.axpy(1.0, seed.values.data(), next.values.data(), next.values.size());
    std::swap(adjoint, next);
  }
  return out;
}

MaskGradient grad_score_wrt_edge_mask(const rec::LightGCNModel& model,
                                      std::span<const double> mask, UserId user,
                                      ItemId item) {
  const std::pair<ItemId, double> one{item, 1.0};
  return grad_scores_wrt_edge_mask(model, mask, user, std::span(&one, 1));
}

std::vector<double> expand_scope_mask(const rec::LightGCNModel& model,
                                      std::span<const EdgeId> scope,
                                      std::span<const double> scope_mask) {
  if (scope.size() != scope_mask.size()) {
    throw DomainError("scope mask length must equal the scope size");
  }
  std::vector<double> full(model.graph().num_interactions(), 1.0);
  for (std::size_t k = 0; k < scope.size(); ++k) full[scope[k]] = scope_mask[k];
  return full;
}

MaskGradient grad_score_wrt_scope_mask(const rec::LightGCNModel& model,
                                       std::span<const EdgeId> scope,
                                       std::span<const double> scope_mask,
                                       UserId user, ItemId item) {
  const auto full = expand_scope_mask(model, scope, scope_mask);
  const auto grad = grad_score_wrt_edge_mask(model, full, user, item);
  MaskGradient out;
  out.entries.reserve(scope.size());
  for (EdgeId e : scope) out.entries.push_back(grad.entries[e]);
  return out;
}

}  // namespace cfx::diff
