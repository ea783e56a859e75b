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

#include "cfx/rec/recommender.hpp"

#include <algorithm>
#include <string>

namespace cfx::rec {

std::string_view model_kind_name(ModelKind k) {
  return k == ModelKind::kMF ? "mf" : "lightgcn";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "mf" || name == "MF") return ModelKind::kMF;
  if (name == "lightgcn" || name == "LightGCN") return ModelKind::kLightGCN;
  throw ConfigError("unknown recommender kind: " + std::string(name));
}

std::vector<double> Recommender::score_items(
    const UserState& state, std::span<const ItemId> items) const {
  const auto all = score_all(state);
  std::vector<double> out;
  out.reserve(items.size());
  for (ItemId i : items) out.push_back(all[i]);
  return out;
}

UserState Recommender::original_state(UserId u) const {
  if (u >= num_users()) throw DomainError("user out of range: " + std::to_string(u));
  UserState s;
  s.user = u;
  const auto row = graph().row(u);
  s.history.assign(row.begin(), row.end());
  return s;
}

RankedList Recommender::rank(const UserState& state,
                             const CandidatePool& pool) const {
  return rank_items(score_all(state), pool);
}

RankedList Recommender::top_k(const UserState& state, const CandidatePool& pool,
                              std::size_t k) const {
  return rec::top_k(score_all(state), pool, k);
}

std::vector<ItemId> remove_items(std::span<const ItemId> base,
                                 std::span<const ItemId> removed) {
  std::vector<ItemId> out;
  out.reserve(base.size());
  std::set_difference(base.begin(), base.end(), removed.begin(), removed.end(),
                      std::back_inserter(out));
  return out;
}

bool EarlyStopper::update(int epoch, double metric) {
  if (best_epoch_ < 0 || metric > best_metric_) {
    best_epoch_ = epoch;
    best_metric_ = metric;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

double recall_at_k(const Recommender& model,
                   std::span<const data::Interaction> holdout, std::size_t k) {
  if (holdout.empty()) return 0.0;
  std::vector<data::Interaction> sorted(holdout.begin(), holdout.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  std::size_t users = 0;
  for (std::size_t a = 0; a < sorted.size();) {
    const UserId u = sorted[a].first;
    std::size_t b = a;
    while (b < sorted.size() && sorted[b].first == u) ++b;
    const UserState state = model.original_state(u);
    const CandidatePool pool(model.num_items(), state.history);
    if (pool.size() > 0) {
      const auto top = model.top_k(state, pool, k);
      std::size_t hits = 0;
      for (std::size_t c = a; c < b; ++c) {
        if (top.contains(sorted[c].second)) ++hits;
      }
      total += static_cast<double>(hits) / static_cast<double>(b - a);
      ++users;
    }
    a = b;
  }
  return users ? total / static_cast<double>(users) : 0.0;
}

}  // namespace cfx::rec
