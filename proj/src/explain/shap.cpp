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
#include <bit>
#include <numeric>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {

std::vector<double> exact_shapley(std::size_t n, std::span<const double> values) {
  if (n >= 31) throw DomainError("exact Shapley limited to fewer than 31 players");
  const std::size_t subsets = std::size_t{1} << n;
  if (values.size() != subsets) throw DomainError("value table must have 2^n entries");
  // weight[s] = s! (n-s-1)! / n!
  std::vector<double> weight(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double w = 1.0 / static_cast<double>(n);
    // 1 / (n * C(n-1, s))
    for (std::size_t k = 1; k <= s; ++k) {
      w *= static_cast<double>(k) / static_cast<double>(n - k);
    }
    weight[s] = w;
  }
  std::vector<double> phi(n, 0.0);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      if (mask & bit) continue;
      phi[j] += weight[size] * (values[mask | bit] - values[mask]);
    }
  }
  return phi;
}

ImplicitMask explain_shap(const ExplainContext& ctx, const ExplanationTarget& target,
                          const ShapConfig& config) {
  const std::size_t n = ctx.history.size();
  if (n == 0) throw DegenerateError("SHAP needs a non-empty history");
  ImplicitMask mask;
  mask.items = ctx.history;
  std::vector<ItemId> kept;
  kept.reserve(n);

  if (n <= config.exact_limit) {
    const std::size_t subsets = std::size_t{1} << n;
    std::vector<double> values(subsets);
    for (std::size_t s = 0; s < subsets; ++s) {
      kept.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (s & (std::size_t{1} << j)) kept.push_back(ctx.history[j]);
      }
      values[s] = target_value(*ctx.model, ctx.state_with(kept), target);
    }
    mask.scores = exact_shapley(n, values);
    mask.queries_used = subsets;
    return mask;
  }

  if (config.n_permutations == 0) throw ConfigError("shap n_permutations must be >= 1");
  Rng rng(mix_seed(config.seed, ctx.user));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  std::vector<char> present(n);
  const double empty_value = target_value(*ctx.model, ctx.state_with({}), target);
  std::size_t walks = 0;

  const auto walk = [&](const std::vector<std::size_t>& perm) {
    std::fill(present.begin(), present.end(), 0);
    double prev = empty_value;
    for (std::size_t step = 0; step < n; ++step) {
      present[perm[step]] = 1;
      kept.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (present[j]) kept.push_back(ctx.history[j]);
      }
      const double v = target_value(*ctx.model, ctx.state_with(kept), target);
      phi[perm[step]] += v - prev;
      prev = v;
    }
    ++walks;
  };

  while (walks < config.n_permutations) {
    rng.shuffle(order);
    walk(order);
    if (walks < config.n_permutations) {
      std::vector<std::size_t> rev(order.rbegin(), order.rend());
      walk(rev);
    }
  }
  for (auto& v : phi) v /= static_cast<double>(walks);
  mask.scores = std::move(phi);
  mask.queries_used = 1 + walks * n;
  return mask;
}

}  // namespace cfx::explain
