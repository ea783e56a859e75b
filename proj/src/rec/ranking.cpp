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

#include "cfx/rec/ranking.hpp"

#include <algorithm>

namespace cfx::rec {

bool RankedList::contains(ItemId i) const {
  return std::find(items.begin(), items.end(), i) != items.end();
}

CandidatePool::CandidatePool(std::size_t num_items,
                             std::span<const ItemId> history) {
  std::vector<bool> taken(num_items, false);
  for (ItemId i : history) {
    if (i < num_items) taken[i] = true;
  }
  items_.reserve(num_items - std::min(num_items, history.size()));
  for (ItemId i = 0; i < num_items; ++i) {
    if (!taken[i]) items_.push_back(i);
  }
}

bool CandidatePool::contains(ItemId i) const {
  return std::binary_search(items_.begin(), items_.end(), i);
}

namespace {

RankedList ordered_prefix(std::span<const double> scores,
                          const CandidatePool& pool, std::size_t k) {
  std::vector<ItemId> order(pool.items().begin(), pool.items().end());
  const auto cmp = [&](ItemId a, ItemId b) {
    return ranks_before(scores[a], a, scores[b], b);
  };
  k = std::min(k, order.size());
  if (k < order.size()) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                      order.end(), cmp);
    order.resize(k);
  } else {
    std::sort(order.begin(), order.end(), cmp);
  }
  RankedList out;
  out.items = std::move(order);
  out.scores.reserve(out.items.size());
  for (ItemId i : out.items) out.scores.push_back(scores[i]);
  return out;
}

}  // namespace

RankedList rank_items(std::span<const double> scores,
                      const CandidatePool& pool) {
  if (pool.size() == 0) throw DomainError("candidate pool is empty");
  return ordered_prefix(scores, pool, pool.size());
}

RankedList top_k(std::span<const double> scores, const CandidatePool& pool,
                 std::size_t k) {
  if (k == 0) throw DomainError("top_k requires K >= 1");
  if (pool.size() == 0) throw DomainError("candidate pool is empty");
  return ordered_prefix(scores, pool, k);
}

std::size_t rank_of(std::span<const double> scores, const CandidatePool& pool,
                    ItemId item) {
  if (!pool.contains(item)) {
    throw DomainError("item " + std::to_string(item) + " is not a candidate");
  }
  const double s = scores[item];
  std::size_t ahead = 0;
  for (ItemId j : pool.items()) {
    if (j != item && ranks_before(scores[j], j, s, item)) ++ahead;
  }
  return ahead + 1;
}

bool best_candidate_excluding(std::span<const double> scores,
                              const CandidatePool& pool,
                              std::span<const ItemId> excluded, ItemId& out) {
  bool found = false;
  for (ItemId j : pool.items()) {
    if (std::find(excluded.begin(), excluded.end(), j) != excluded.end()) continue;
    if (!found || ranks_before(scores[j], j, scores[out], out)) {
      out = j;
      found = true;
    }
  }
  return found;
}

}  // namespace cfx::rec
