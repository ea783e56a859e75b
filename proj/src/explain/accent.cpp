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
#include <array>
#include <limits>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {

AccentResult explain_accent(const ExplainContext& ctx, const ExplanationTarget& target,
                            const AccentConfig& config) {
  if (target.level != Level::kItem) throw DomainError("ACCENT is item level only");
  const ItemId t = *target.item;
  const std::size_t n = ctx.history.size();
  const std::size_t budget =
      config.max_removals == 0 ? n : std::min(config.max_removals, n);

  AccentResult res;
  auto& out = res.perturbation;
  res.mask.items = ctx.history;
  res.mask.scores.assign(n, 0.0);

  std::vector<char> removed(n, 0);
  std::vector<ItemId> removed_items;
  auto scores = ctx.model->score_all(ctx.original_state());
  ++out.queries_used;
  bool first = true;

  while (removed_items.size() < budget) {
    const ItemId rep = replacement_item(scores, ctx.pool, t, target.k);
    const double gap_now = scores[t] - scores[rep];
    const std::array<ItemId, 2> pair{t, rep};
    std::size_t best = n;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<ItemId> trial;
    for (std::size_t j = 0; j < n; ++j) {
      if (removed[j]) continue;
      trial = removed_items;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), ctx.history[j]),
                   ctx.history[j]);
      const auto s = ctx.model->score_items(
          ctx.state_with(rec::remove_items(ctx.history, trial)), pair);
      ++out.queries_used;
      const double gap = s[0] - s[1];
      if (first) res.mask.scores[j] = gap_now - gap;
      if (gap < best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    first = false;
    removed[best] = 1;
    removed_items.insert(
        std::lower_bound(removed_items.begin(), removed_items.end(), ctx.history[best]),
        ctx.history[best]);
    scores = ctx.model->score_all(ctx.state_with(rec::remove_items(ctx.history, removed_items)));
    ++out.queries_used;
    if (rec::rank_of(scores, ctx.pool, t) > target.k) {
      out.success = true;
      break;
    }
  }
  out.removed = user_edges(ctx, removed_items);
  res.mask.queries_used = out.queries_used;
  return res;
}

}  // namespace cfx::explain
