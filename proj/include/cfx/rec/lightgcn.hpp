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
#include <memory>
#include <span>
#include <vector>

#include "cfx/rec/recommender.hpp"

namespace cfx::rec {

struct LightGCNConfig {
  std::size_t dim = 32;
  std::size_t layers = 2;
  double lr = 0.01;
  double l2 = 1e-4;
  int epochs = 100;
  int patience = 20;
  std::size_t batch_size = 2048;
  double init_std = 0.1;
  std::uint64_t seed = 1;
  std::size_t recall_k = 20;
};

// Node embeddings for users then items: row u is user u, row |U| + i is item i.
struct NodeEmbeddings {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> user(UserId u) const {
    return {values.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<const double> item(ItemId i) const {
    return {values.data() + (num_users + i) * dim, dim};
  }
  std::span<double> node(std::size_t n) { return {values.data() + n * dim, dim}; }
  std::span<const double> node(std::size_t n) const {
    return {values.data() + n * dim, dim};
  }
};

// Per-layer embeddings of one propagation (layer 0 is the input table) plus
// their uniform mean.
struct Propagation {
  std::vector<NodeEmbeddings> layers;
  NodeEmbeddings final;
};

// Graph convolution without transforms or nonlinearities:
//   E^(l+1) = A(w) E^(l),   A(w)_{ui} = c_e w_e,   c_e = 1 / sqrt(d_u d_i)
// with c_e frozen at the training-graph degrees. The final embedding is the
// mean over layers 0..L and score(u, i) = <f_u, f_i>.
class LightGCNModel final : public Recommender {
 public:
  LightGCNModel(std::shared_ptr<const data::InteractionMatrix> graph,
                std::size_t dim, std::size_t layers,
                std::vector<double> initial_embeddings);

  ModelKind kind() const override { return ModelKind::kLightGCN; }
  const data::InteractionMatrix& graph() const override { return *graph_; }
  std::shared_ptr<const data::InteractionMatrix> graph_ptr() const { return graph_; }

  std::vector<double> score_all(const UserState& state) const override;
  std::vector<double> score_items(const UserState& state,
                                  std::span<const ItemId> items) const override;

  std::size_t dim() const { return dim_; }
  std::size_t layers() const { return layers_; }
  const std::vector<double>& initial_embeddings() const { return initial_.values; }
  const std::vector<double>& normalization() const { return norm_; }

  // Per-edge weights for a state: 0 for removed edges and for edges of
  // state.user whose item left the history, 1 elsewhere. Empty when the state
  // is unperturbed. Throws DomainError when the history adds items the graph
  // does not contain.
  std::vector<double> edge_mask(const UserState& state) const;

  // Propagation under per-edge weights (empty = all ones).
  Propagation propagate(std::span<const double> edge_weights) const;

  // Unperturbed final embeddings, computed once at construction.
  const NodeEmbeddings& base_embeddings() const { return base_final_; }

 private:
  std::shared_ptr<const data::InteractionMatrix> graph_;
  std::size_t dim_;
  std::size_t layers_;
  NodeEmbeddings initial_;
  std::vector<double> norm_;
  NodeEmbeddings base_final_;
};

// One application of the normalized adjacency: out = A(w) in. `out` is
// overwritten. Exposed for gradient code and tests.
void propagate_layer(const data::InteractionMatrix& graph,
                     std::span<const double> norm,
                     std::span<const double> edge_weights,
                     const NodeEmbeddings& in, NodeEmbeddings& out);

std::vector<double> frozen_normalization(const data::InteractionMatrix& graph);

// Free-function form of LightGCNModel::propagate returning final embeddings.
NodeEmbeddings propagate_lightgcn(const LightGCNModel& model,
                                  std::span<const double> edge_mask);

LightGCNModel train_lightgcn(const data::DatasetSplit& split,
                             const LightGCNConfig& config,
                             TrainingLog* log = nullptr);

}  // namespace cfx::rec
