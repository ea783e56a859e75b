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

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "cfx/common.hpp"
#include "cfx/data/interactions.hpp"
#include "cfx/rec/ranking.hpp"

namespace cfx::rec {

enum class ModelKind { kMF, kLightGCN };

std::string_view model_kind_name(ModelKind k);
ModelKind parse_model_kind(std::string_view name);

// The input a recommender scores: a user's (possibly perturbed) interaction
// vector, plus graph edges removed elsewhere for graph-based models.
struct UserState {
  UserId user = 0;
  std::vector<ItemId> history;        // sorted
  std::vector<EdgeId> removed_edges;  // sorted, ids into the training graph
};

// Trained scoring function. Parameters are frozen after construction and
// every method is const and thread-safe.
class Recommender {
 public:
  virtual ~Recommender() = default;

  virtual ModelKind kind() const = 0;
  virtual std::size_t num_users() const { return graph().num_users(); }
  virtual std::size_t num_items() const { return graph().num_items(); }

  // Training interactions (the unperturbed input of every user).
  virtual const data::InteractionMatrix& graph() const = 0;

  // Relevance score of every item under the given state.
  virtual std::vector<double> score_all(const UserState& state) const = 0;

  // Scores for a subset of items, in the order given.
  virtual std::vector<double> score_items(const UserState& state,
                                          std::span<const ItemId> items) const;

  UserState original_state(UserId u) const;

  // Ranking of the candidate pool under the state.
  RankedList rank(const UserState& state, const CandidatePool& pool) const;
  RankedList top_k(const UserState& state, const CandidatePool& pool,
                   std::size_t k) const;
};

// History of `base` with `removed` items dropped (both sorted).
std::vector<ItemId> remove_items(std::span<const ItemId> base,
                                 std::span<const ItemId> removed);

// Patience-based early stopping on a higher-is-better validation metric.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}

  // Returns true when `metric` is a strict improvement.
  bool update(int epoch, double metric);
  bool should_stop() const { return since_best_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_metric() const { return best_metric_; }

 private:
  int patience_;
  int best_epoch_ = -1;
  double best_metric_ = 0.0;
  int since_best_ = 0;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double val_recall = 0.0;
};

struct TrainingLog {
  std::vector<EpochLog> epochs;
  int best_epoch = -1;
  int stopped_epoch = -1;
};

// Mean over holdout users of |top-k ∩ holdout| / |holdout|, ranking items the
// user has not trained on.
double recall_at_k(const Recommender& model,
                   std::span<const data::Interaction> holdout, std::size_t k);

}  // namespace cfx::rec
