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

#include <algorithm>
#include <string>

#include "cfx/explain/explainers.hpp"
#include "cfx/explain/types.hpp"

namespace cfx::explain {

std::string_view level_name(Level l) { return l == Level::kItem ? "item" : "list"; }

std::string_view format_name(Format f) {
  return f == Format::kImplicit ? "implicit" : "explicit";
}

Level parse_level(std::string_view s) {
  if (s == "item") return Level::kItem;
  if (s == "list") return Level::kList;
  throw ConfigError("unknown evaluation level: " + std::string(s));
}

Format parse_format(std::string_view s) {
  if (s == "implicit") return Format::kImplicit;
  if (s == "explicit") return Format::kExplicit;
  throw ConfigError("unknown explanation format: " + std::string(s));
}

ExplanationTarget ExplanationTarget::item_level(const rec::RankedList& top,
                                                std::size_t k,
                                                std::size_t position) {
  if (position == 0 || position > top.size() || position > k) {
    throw DomainError("target position " + std::to_string(position) +
                      " outside the top-" + std::to_string(k));
  }
  ExplanationTarget t;
  t.level = Level::kItem;
  t.k = k;
  t.item = top.items[position - 1];
  t.original_top_k = top;
  return t;
}

ExplanationTarget ExplanationTarget::list_level(const rec::RankedList& top,
                                                std::size_t k) {
  ExplanationTarget t;
  t.level = Level::kList;
  t.k = k;
  t.original_top_k = top;
  return t;
}

ExplainContext ExplainContext::make(const rec::Recommender& model, UserId user) {
  ExplainContext ctx;
  ctx.model = &model;
  ctx.user = user;
  const auto row = model.graph().row(user);
  ctx.history.assign(row.begin(), row.end());
  ctx.pool = rec::CandidatePool(model.num_items(), ctx.history);
  return ctx;
}

rec::UserState ExplainContext::state_with(std::span<const ItemId> kept) const {
  rec::UserState s;
  s.user = user;
  s.history.assign(kept.begin(), kept.end());
  return s;
}

rec::UserState ExplainContext::state_without_edges(
    std::span<const EdgeId> removed) const {
  const auto& g = model->graph();
  std::vector<ItemId> dropped;
  rec::UserState s;
  s.user = user;
  for (EdgeId e : removed) {
    if (g.edge_user(e) == user) {
      dropped.push_back(g.edge_item(e));
    } else {
      s.removed_edges.push_back(e);
    }
  }
  std::sort(dropped.begin(), dropped.end());
  std::sort(s.removed_edges.begin(), s.removed_edges.end());
  s.history = rec::remove_items(history, dropped);
  return s;
}

std::vector<double> ImplicitMask::normalized() const {
  std::vector<double> out(scores.size(), 0.0);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out[k] = (scores[k] - *lo) / range;
  }
  return out;
}

double target_value(const rec::Recommender& model, const rec::UserState& state,
                    const ExplanationTarget& target) {
  if (target.level == Level::kItem) {
    const ItemId item = *target.item;
    return model.score_items(state, std::span(&item, 1))[0];
  }
  const auto scores = model.score_items(state, target.original_top_k.items);
  double total = 0.0;
  for (double s : scores) total += s;
  return scores.empty() ? 0.0 : total / static_cast<double>(scores.size());
}

std::size_t displaced_count(const ExplainContext& ctx, const rec::UserState& state,
                            const ExplanationTarget& target) {
  const auto scores = ctx.model->score_all(state);
  std::size_t out = 0;
  for (ItemId i : target.original_top_k.items) {
    if (rec::rank_of(scores, ctx.pool, i) > target.k) ++out;
  }
  return out;
}

bool is_counterfactual(const ExplainContext& ctx, const rec::UserState& state,
                       const ExplanationTarget& target) {
  const auto scores = ctx.model->score_all(state);
  if (target.level == Level::kItem) {
    return rec::rank_of(scores, ctx.pool, *target.item) > target.k;
  }
  for (ItemId i : target.original_top_k.items) {
    if (rec::rank_of(scores, ctx.pool, i) > target.k) return true;
  }
  return false;
}

ItemId replacement_item(std::span<const double> scores, const rec::CandidatePool& pool,
                        ItemId target, std::size_t k) {
  const auto ranked = rec::rank_items(scores, pool);
  std::size_t seen = 0;
  for (ItemId i : ranked.items) {
    if (i == target) continue;
    if (++seen == k) return i;
  }
  return target;
}

std::vector<EdgeId> user_edges(const ExplainContext& ctx,
                               std::span<const ItemId> items) {
  std::vector<EdgeId> out;
  out.reserve(items.size());
  for (ItemId i : items) {
    if (auto e = ctx.model->graph().edge_id(ctx.user, i)) out.push_back(*e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ImplicitMask explain_random(const ExplainContext& ctx, std::uint64_t seed) {
  ImplicitMask m;
  m.items = ctx.history;
  m.scores.reserve(ctx.history.size());
  for (ItemId i : ctx.history) m.scores.push_back(hashed_uniform(seed, ctx.user, i));
  return m;
}

}  // namespace cfx::explain
