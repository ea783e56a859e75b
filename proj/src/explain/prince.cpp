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
#include <limits>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {
ExplicitPerturbation explain_prince(const ExplainContext& ctx,
                                    const ExplanationTarget& target,
                                    const PrinceConfig& config) {
  if (target.level != Level::kItem) throw DomainError("PRINCE is item level only");
  const ItemId t = *target.item;
  const auto& g = ctx.model->graph();
  const std::size_t nu = g.num_users();

  // PPR from each action item.
  std::vector<std::vector<double>> ppr;
  ppr.reserve(ctx.history.size());
  for (ItemId a : ctx.history) {
    ppr.push_back(personalized_pagerank(g, nu + a, config.alpha, config.ppr_eps,
                                        config.max_iterations));
  }

  const std::size_t budget = config.max_removals == 0
                                 ? ctx.history.size()
                                 : std::min(config.max_removals, ctx.history.size());
  ExplicitPerturbation out;
  std::vector<char> removed(ctx.history.size(), 0);
  std::vector<ItemId> removed_items;
  auto state = ctx.original_state();
  auto scores = ctx.model->score_all(state);
  ++out.queries_used;

  while (removed_items.size() < budget) {
    const ItemId rep = replacement_item(scores, ctx.pool, t, target.k);
    std::size_t best = ctx.history.size();
    double best_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ctx.history.size(); ++j) {
      if (removed[j]) continue;
      const double margin = ppr[j][nu + t] - ppr[j][nu + rep];
      if (margin > best_margin) {
        best_margin = margin;
        best = j;
      }
    }
    removed[best] = 1;
    removed_items.insert(
        std::lower_bound(removed_items.begin(), removed_items.end(), ctx.history[best]),
        ctx.history[best]);
    state = ctx.state_with(rec::remove_items(ctx.history, removed_items));
    scores = ctx.model->score_all(state);
    ++out.queries_used;
    if (rec::rank_of(scores, ctx.pool, t) > target.k) {
      out.success = true;
      break;
    }
  }
  out.removed = user_edges(ctx, removed_items);
  return out;
}

}  // namespace cfx::explain
