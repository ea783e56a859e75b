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
#include <numeric>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {

std::size_t removal_count(std::size_t n, std::size_t t, std::size_t steps) {
  if (steps == 0) throw ConfigError("perturbation steps T must be >= 1");
  // floor(t n / T + 1/2) in integers.
  return (2 * t * n + steps) / (2 * steps);
}

PerturbationSequence build_perturbation_sequence(const ImplicitMask& mask,
                                                 std::size_t steps) {
  if (steps == 0) throw ConfigError("perturbation steps T must be >= 1");
  if (mask.items.size() != mask.scores.size()) {
    throw DomainError("mask items and scores differ in length");
  }
  const std::size_t n = mask.items.size();
  std::vector<std::size_t> desc(n);
  std::iota(desc.begin(), desc.end(), 0);
  auto asc = desc;
  std::sort(desc.begin(), desc.end(), [&](std::size_t a, std::size_t b) {
    if (mask.scores[a] != mask.scores[b]) return mask.scores[a] > mask.scores[b];
    return mask.items[a] < mask.items[b];
  });
  std::sort(asc.begin(), asc.end(), [&](std::size_t a, std::size_t b) {
    if (mask.scores[a] != mask.scores[b]) return mask.scores[a] < mask.scores[b];
    return mask.items[a] < mask.items[b];
  });

  std::vector<ItemId> all = mask.items;
  std::sort(all.begin(), all.end());
  const auto kept_after = [&](const std::vector<std::size_t>& order, std::size_t c) {
    std::vector<ItemId> removed;
    removed.reserve(c);
    for (std::size_t k = 0; k < c; ++k) removed.push_back(mask.items[order[k]]);
    std::sort(removed.begin(), removed.end());
    return rec::remove_items(all, removed);
  };

  PerturbationSequence seq;
  seq.pos.reserve(steps);
  seq.neg.reserve(steps);
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::size_t c = removal_count(n, t, steps);
    seq.pos.push_back(kept_after(desc, c));
    seq.neg.push_back(kept_after(asc, c));
  }
  return seq;
}

}  // namespace cfx::explain
