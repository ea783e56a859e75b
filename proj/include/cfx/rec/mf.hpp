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

struct MFConfig {
  std::size_t dim = 32;
  double lr = 0.05;
  double l2 = 1e-4;
  int epochs = 100;
  int patience = 20;
  std::size_t neg_samples = 1;
  double init_std = 0.1;
  std::uint64_t seed = 1;
  std::size_t recall_k = 20;
};

// Fold-in matrix factorization. A user is represented by the mean embedding
// of the items in their interaction vector, so the model consumes x_u
// directly and responds to any perturbation of it:
//   score(i | H) = mean_{j in H} Q_j . Q_i + b_i   (b_i alone when H is empty)
class MFModel final : public Recommender {
 public:
  MFModel(std::shared_ptr<const data::InteractionMatrix> graph, std::size_t dim,
          std::vector<double> item_embeddings, std::vector<double> item_bias);

  ModelKind kind() const override { return ModelKind::kMF; }
  const data::InteractionMatrix& graph() const override { return *graph_; }
  std::shared_ptr<const data::InteractionMatrix> graph_ptr() const { return graph_; }

  std::vector<double> score_all(const UserState& state) const override;
  std::vector<double> score_items(const UserState& state,
                                  std::span<const ItemId> items) const override;

  std::size_t dim() const { return dim_; }
  std::span<const double> item_embedding(ItemId i) const {
    return {embeddings_.data() + static_cast<std::size_t>(i) * dim_, dim_};
  }
  double item_bias(ItemId i) const { return bias_[i]; }
  const std::vector<double>& embeddings() const { return embeddings_; }
  const std::vector<double>& biases() const { return bias_; }

  // Mean of the history's item embeddings (zero vector for an empty history).
  std::vector<double> user_representation(std::span<const ItemId> history) const;

  // Effective history of a state: removed edges of this user also drop items.
  std::vector<ItemId> effective_history(const UserState& state) const;

  double score(std::span<const ItemId> history, ItemId item) const;

 private:
  std::shared_ptr<const data::InteractionMatrix> graph_;
  std::size_t dim_;
  std::vector<double> embeddings_;  // |I| x dim, row-major
  std::vector<double> bias_;
};

double score_mf(const MFModel& model, std::span<const ItemId> history,
                ItemId item);

MFModel train_mf(const data::DatasetSplit& split, const MFConfig& config,
                 TrainingLog* log = nullptr);

}  // namespace cfx::rec
