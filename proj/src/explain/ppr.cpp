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

#include <cmath>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {

std::vector<double> personalized_pagerank(const data::InteractionMatrix& graph,
                                          std::size_t source, double alpha,
                                          double eps, std::size_t max_iterations) {
  const std::size_t nu = graph.num_users();
  const std::size_t nodes = nu + graph.num_items();
  if (source >= nodes) throw DomainError("PPR source node out of range");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("PPR alpha must be in (0, 1]");

  std::vector<double> pi(nodes, 0.0), next(nodes);
  pi[source] = 1.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      const double mass = pi[u];
      if (mass == 0.0) continue;
      const auto items = graph.row(static_cast<UserId>(u));
      if (items.empty()) {
        dangling += mass;
        continue;
      }
      const double share = (1.0 - alpha) * mass / static_cast<double>(items.size());
      for (ItemId i : items) next[nu + i] += share;
    }
    for (std::size_t i = 0; i < graph.num_items(); ++i) {
      const double mass = pi[nu + i];
      if (mass == 0.0) continue;
      const auto users = graph.col(static_cast<ItemId>(i));
      if (users.empty()) {
        dangling += mass;
        continue;
      }
      const double share = (1.0 - alpha) * mass / static_cast<double>(users.size());
      for (UserId u : users) next[u] += share;
    }
    next[source] += alpha + (1.0 - alpha) * dangling;
    double delta = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) delta += std::abs(next[k] - pi[k]);
    pi.swap(next);
    if (delta < eps) break;
  }
  return pi;
}

}  // namespace cfx::explain
