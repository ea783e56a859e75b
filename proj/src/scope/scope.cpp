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

#include "cfx/scope/scope.hpp"

#include <deque>
#include <limits>
#include <string>

namespace cfx::scope {
namespace {

constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();

}  // namespace

std::string_view scope_kind_name(ScopeKind k) {
  switch (k) {
    case ScopeKind::kFull: return "full";
    case ScopeKind::kKHop: return "khop";
    case ScopeKind::kIndirect: return "indirect";
    case ScopeKind::kUserOnly: return "useronly";
  }
  return "full";
}

ScopeKind parse_scope_kind(std::string_view s) {
  if (s == "full") return ScopeKind::kFull;
  if (s == "khop" || s == "k_hop") return ScopeKind::kKHop;
  if (s == "indirect") return ScopeKind::kIndirect;
  if (s == "useronly" || s == "user_only") return ScopeKind::kUserOnly;
  throw ConfigError("unknown scope: " + std::string(s));
}

std::vector<std::size_t> hop_distances(const data::InteractionMatrix& graph,
                                       std::size_t source, std::size_t max_hops) {
  const std::size_t nu = graph.num_users();
  std::vector<std::size_t> dist(nu + graph.num_items(), kFar);
  if (source >= dist.size()) throw DomainError("scope source node out of range");
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    if (dist[n] >= max_hops) continue;
    const auto visit = [&](std::size_t m) {
      if (dist[m] == kFar) {
        dist[m] = dist[n] + 1;
        queue.push_back(m);
      }
    };
    if (n < nu) {
      for (ItemId i : graph.row(static_cast<UserId>(n))) visit(nu + i);
    } else {
      for (UserId u : graph.col(static_cast<ItemId>(n - nu))) visit(u);
    }
  }
  return dist;
}

PerturbationScope extract_scope(const data::InteractionMatrix& graph, UserId user,
                                std::span<const ItemId> targets, ScopeKind kind,
                                std::size_t k) {
  if (user >= graph.num_users()) throw DomainError("scope user out of range");
  PerturbationScope out;
  out.kind = kind;
  out.k = k;
  const std::size_t nu = graph.num_users();
  const std::size_t n_edges = graph.num_interactions();

  switch (kind) {
    case ScopeKind::kFull:
      out.edges.resize(n_edges);
      for (EdgeId e = 0; e < n_edges; ++e) out.edges[e] = e;
      return out;
    case ScopeKind::kUserOnly: {
      const auto first = static_cast<EdgeId>(graph.row_offset(user));
      for (std::size_t j = 0; j < graph.row(user).size(); ++j) {
        out.edges.push_back(first + static_cast<EdgeId>(j));
      }
      return out;
    }
    default:
      break;
  }
  if (k == 0) throw ConfigError("hop count must be >= 1 for khop and indirect scopes");

  if (kind == ScopeKind::kKHop) {
    std::vector<char> inside(nu + graph.num_items(), 0);
    const auto mark = [&](std::size_t source) {
      const auto d = hop_distances(graph, source, k);
      for (std::size_t n = 0; n < d.size(); ++n) {
        if (d[n] <= k) inside[n] = 1;
      }
    };
    mark(user);
    for (ItemId t : targets) mark(nu + t);
    for (EdgeId e = 0; e < n_edges; ++e) {
      if (inside[graph.edge_user(e)] && inside[nu + graph.edge_item(e)]) {
        out.edges.push_back(e);
      }
    }
    return out;
  }

  // User-item walks have odd length.
  const std::size_t limit = 2 * k + 1;
  const auto from_user = hop_distances(graph, user, limit);
  std::vector<char> keep(n_edges, 0);
  for (ItemId t : targets) {
    const auto from_target = hop_distances(graph, nu + t, limit);
    for (EdgeId e = 0; e < n_edges; ++e) {
      const std::size_t a = graph.edge_user(e);
      const std::size_t b = nu + graph.edge_item(e);
      const auto fits = [&](std::size_t x, std::size_t y) {
        return from_user[x] != kFar && from_target[y] != kFar &&
               from_user[x] + 1 + from_target[y] <= limit;
      };
      if (fits(a, b) || fits(b, a)) keep[e] = 1;
    }
  }
  for (EdgeId e = 0; e < n_edges; ++e) {
    if (keep[e]) out.edges.push_back(e);
  }
  return out;
}

}  // namespace cfx::scope
