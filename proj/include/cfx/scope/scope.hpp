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
#include <string_view>
#include <vector>

#include "cfx/data/interactions.hpp"

namespace cfx::scope {

enum class ScopeKind { kFull, kKHop, kIndirect, kUserOnly };

// "full", "khop", "indirect", "useronly".
std::string_view scope_kind_name(ScopeKind k);
ScopeKind parse_scope_kind(std::string_view s);

struct PerturbationScope {
  ScopeKind kind = ScopeKind::kFull;
  std::size_t k = 0;
  std::vector<EdgeId> edges;  // sorted
};

// Hop distances from a node of the bipartite graph (users 0..U-1, items
// U..U+I-1); unreachable nodes get SIZE_MAX. Stops expanding past max_hops.
std::vector<std::size_t> hop_distances(const data::InteractionMatrix& graph,
                                       std::size_t source, std::size_t max_hops);

// k_hop: edges with both endpoints inside the union of the k-hop
// neighbourhoods of the user and the targets. indirect: edges lying on a
// user-target walk of at most 2k+1 hops. Throws ConfigError for k = 0 under
// k_hop/indirect.
PerturbationScope extract_scope(const data::InteractionMatrix& graph, UserId user,
                                std::span<const ItemId> targets, ScopeKind kind,
                                std::size_t k);

}  // namespace cfx::scope
