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
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {
namespace {

struct TreeNode {
  std::vector<EdgeId> subset;  // sorted
  std::vector<EdgeId> untried;
  std::vector<std::size_t> children;
  std::size_t visits = 0;
  double total = 0.0;
  double reward = 0.0;
};

// Scope edges touching the subgraph grown from the user, minus the subset.
std::vector<EdgeId> frontier(const ExplainContext& ctx, const std::vector<EdgeId>& subset) {
  const auto& g = ctx.model->graph();
  const std::size_t nu = g.num_users();
  std::set<std::size_t> touched{ctx.user};
  for (EdgeId e : subset) {
    touched.insert(g.edge_user(e));
    touched.insert(nu + g.edge_item(e));
  }
  std::vector<EdgeId> out;
  for (EdgeId e : ctx.scope) {
    if (std::binary_search(subset.begin(), subset.end(), e)) continue;
    if (touched.count(g.edge_user(e)) || touched.count(nu + g.edge_item(e))) {
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

double unr_reward(const ExplainContext& ctx, const ExplanationTarget& target,
                  std::span<const EdgeId> removed) {
  if (removed.empty()) return 0.0;
  const auto state = ctx.state_without_edges(removed);
  if (target.level == Level::kItem) return is_counterfactual(ctx, state, target) ? 1.0 : 0.0;
  return static_cast<double>(displaced_count(ctx, state, target)) /
         static_cast<double>(target.original_top_k.size());
}

ExplicitPerturbation explain_unr(const ExplainContext& ctx, const ExplanationTarget& target,
                                 const UnrConfig& config) {
  ExplicitPerturbation out;
  if (ctx.scope.empty() || config.max_size == 0) return out;
  Rng rng(mix_seed(config.seed, ctx.user));
  std::map<std::vector<EdgeId>, double> cache;
  const auto reward_of = [&](const std::vector<EdgeId>& subset) {
    auto it = cache.find(subset);
    if (it != cache.end()) return it->second;
    ++out.queries_used;
    const double r = unr_reward(ctx, target, subset);
    cache.emplace(subset, r);
    return r;
  };

  std::vector<TreeNode> tree(1);
  tree[0].untried = frontier(ctx, {});
  std::vector<EdgeId> best;
  double best_reward = 0.0;
  const auto consider = [&](const std::vector<EdgeId>& subset, double r) {
    if (r > best_reward || (r == best_reward && r > 0.0 && subset.size() < best.size())) {
      best_reward = r;
      best = subset;
    }
  };

  for (std::size_t it = 0; it < config.n_iterations && best_reward < 1.0; ++it) {
    std::vector<std::size_t> path{0};
    std::size_t cur = 0;
    double r;
    while (true) {
      TreeNode& node = tree[cur];
      const bool room = node.subset.size() < config.max_size;
      if (room && !node.untried.empty()) {
        const std::size_t pick = rng.index(node.untried.size());
        const EdgeId e = node.untried[pick];
        node.untried.erase(node.untried.begin() + static_cast<std::ptrdiff_t>(pick));
        TreeNode child;
        child.subset = node.subset;
        child.subset.insert(std::lower_bound(child.subset.begin(), child.subset.end(), e), e);
        child.untried = frontier(ctx, child.subset);
        child.reward = reward_of(child.subset);
        consider(child.subset, child.reward);
        r = child.reward;
        const std::size_t id = tree.size();
        tree[cur].children.push_back(id);
        tree.push_back(std::move(child));
        path.push_back(id);
        break;
      }
      if (!room || node.children.empty()) {
        r = node.reward;
        break;
      }
      const double log_n = std::log(static_cast<double>(node.visits) + 1.0);
      std::size_t chosen = node.children.front();
      double best_uct = -std::numeric_limits<double>::infinity();
      for (std::size_t c : node.children) {
        const TreeNode& ch = tree[c];
        const double visits = static_cast<double>(ch.visits);
        const double uct = visits == 0.0
                               ? std::numeric_limits<double>::infinity()
                               : ch.total / visits + config.c_uct * std::sqrt(log_n / visits);
        if (uct > best_uct) {
          best_uct = uct;
          chosen = c;
        }
      }
      cur = chosen;
      path.push_back(cur);
    }
    for (std::size_t id : path) {
      tree[id].visits += 1;
      tree[id].total += r;
    }
  }

  if (best_reward > 0.0) {
    out.removed = best;
    out.success = is_counterfactual(ctx, ctx.state_without_edges(best), target);
  }
  return out;
}

}  // namespace cfx::explain
