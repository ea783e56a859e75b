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

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cfx/rec/recommender.hpp"

namespace cfx::explain {

enum class Level { kItem, kList };
enum class Format { kImplicit, kExplicit };

std::string_view level_name(Level l);
std::string_view format_name(Format f);
Level parse_level(std::string_view s);
Format parse_format(std::string_view s);

// What an explanation has to change: one item of the original top-K (item
// level) or the whole list (list level).
struct ExplanationTarget {
  Level level = Level::kItem;
  std::size_t k = 1;
  std::optional<ItemId> item;
  rec::RankedList original_top_k;

  static ExplanationTarget item_level(const rec::RankedList& top, std::size_t k,
                                      std::size_t position);
  static ExplanationTarget list_level(const rec::RankedList& top, std::size_t k);
};

// Everything an explainer may look at for one user. The model and graph are
// shared read-only.
struct ExplainContext {
  const rec::Recommender* model = nullptr;
  UserId user = 0;
  std::vector<ItemId> history;  // original I_u, sorted
  rec::CandidatePool pool;      // I \ I_u, fixed for the explanation
  std::vector<EdgeId> scope;    // perturbable graph edges (graph explainers)

  static ExplainContext make(const rec::Recommender& model, UserId user);

  const rec::Recommender& recommender() const { return *model; }

  // State with the given (sorted) subset of the history retained.
  rec::UserState state_with(std::span<const ItemId> kept) const;
  // State with a set of graph edges removed.
  rec::UserState state_without_edges(std::span<const EdgeId> removed) const;
  rec::UserState original_state() const { return state_with(history); }
};

// Importance score per history interaction, aligned with ExplainContext
// history order.
struct ImplicitMask {
  std::vector<ItemId> items;
  std::vector<double> scores;
  bool fallback = false;  // LIME-RS fell back to per-feature correlation
  std::size_t queries_used = 0;

  // Min-max scaled copy (same order). All-equal scores map to all zeros.
  std::vector<double> normalized() const;
};

struct ExplicitPerturbation {
  std::vector<EdgeId> removed;  // sorted
  std::vector<EdgeId> added;    // always empty for the in-scope methods
  bool success = false;
  std::size_t queries_used = 0;
};

// Score the target is judged by: the item's own score, or the mean score of
// the original top-K at list level.
double target_value(const rec::Recommender& model, const rec::UserState& state,
                    const ExplanationTarget& target);

// Whether a state achieves the counterfactual goal: item level, the target's
// rank exceeds K; list level, at least one original top-K item is displaced.
bool is_counterfactual(const ExplainContext& ctx, const rec::UserState& state,
                       const ExplanationTarget& target);

// Number of original top-K items whose rank exceeds K under the state.
std::size_t displaced_count(const ExplainContext& ctx, const rec::UserState& state,
                            const ExplanationTarget& target);

// K-th best candidate other than `target`: the item at rank K+1 while the
// target sits in the top-K. Returns `target` when the pool is too small.
ItemId replacement_item(std::span<const double> scores, const rec::CandidatePool& pool,
                        ItemId target, std::size_t k);

// Edge ids of the user's history items (sorted).
std::vector<EdgeId> user_edges(const ExplainContext& ctx,
                               std::span<const ItemId> items);

}  // namespace cfx::explain
