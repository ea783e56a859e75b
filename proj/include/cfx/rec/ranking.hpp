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
#include <span>
#include <vector>

#include "cfx/common.hpp"

namespace cfx::rec {

// Ordered prefix of a ranking. Scores are non-increasing; equal scores are
// ordered by ascending item index.
struct RankedList {
  std::vector<ItemId> items;
  std::vector<double> scores;

  std::size_t size() const { return items.size(); }
  bool contains(ItemId i) const;
};

// The rankable item set for one explanation: every item the user has not
// interacted with in the original training history. Kept fixed while the
// history is perturbed.
class CandidatePool {
 public:
  CandidatePool() = default;
  CandidatePool(std::size_t num_items, std::span<const ItemId> history);

  std::span<const ItemId> items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool contains(ItemId i) const;

 private:
  std::vector<ItemId> items_;
};

// True when item a ranks before item b.
inline bool ranks_before(double score_a, ItemId a, double score_b, ItemId b) {
  return score_a > score_b || (score_a == score_b && a < b);
}

// Full descending ordering of the pool under per-item scores (indexed by item).
RankedList rank_items(std::span<const double> scores, const CandidatePool& pool);

// Prefix of rank_items of length min(k, pool size). Throws DomainError when
// k == 0.
RankedList top_k(std::span<const double> scores, const CandidatePool& pool,
                 std::size_t k);

// 1-based rank of item within the pool. Throws DomainError when the item is
// not a candidate.
std::size_t rank_of(std::span<const double> scores, const CandidatePool& pool,
                    ItemId item);

// Highest-ranked candidate that is not in `excluded`. Returns false when every
// candidate is excluded.
bool best_candidate_excluding(std::span<const double> scores,
                              const CandidatePool& pool,
                              std::span<const ItemId> excluded, ItemId& out);

}  // namespace cfx::rec
