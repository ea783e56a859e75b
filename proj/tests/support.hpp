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

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "cfx/common.hpp"
#include "cfx/data/interactions.hpp"
#include "cfx/rec/lightgcn.hpp"
#include "cfx/rec/mf.hpp"

namespace cfx::testing {

inline std::shared_ptr<const data::InteractionMatrix> make_graph(
    std::size_t users, std::size_t items, std::vector<data::Interaction> pairs) {
  return std::make_shared<const data::InteractionMatrix>(users, items, std::move(pairs));
}

// Random bipartite graph; every user keeps at least one edge.
inline std::shared_ptr<const data::InteractionMatrix> random_graph(std::size_t users,
                                                                   std::size_t items,
                                                                   double density,
                                                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<data::Interaction> pairs;
  for (UserId u = 0; u < users; ++u) {
    bool any = false;
    for (ItemId i = 0; i < items; ++i) {
      if (rng.uniform() < density) {
        pairs.emplace_back(u, i);
        any = true;
      }
    }
    if (!any) pairs.emplace_back(u, static_cast<ItemId>(rng.index(items)));
  }
  return make_graph(users, items, std::move(pairs));
}

inline std::vector<double> gaussian(std::size_t n, double std, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = std * rng.normal();
  return v;
}

inline rec::MFModel random_mf(std::shared_ptr<const data::InteractionMatrix> g,
                              std::size_t dim, std::uint64_t seed, double bias_std = 0.1) {
  const std::size_t n = g->num_items();
  return rec::MFModel(g, dim, gaussian(n * dim, 1.0, seed), gaussian(n, bias_std, seed + 1));
}

inline rec::LightGCNModel random_lightgcn(std::shared_ptr<const data::InteractionMatrix> g,
                                          std::size_t dim, std::size_t layers,
                                          std::uint64_t seed) {
  const std::size_t n = g->num_users() + g->num_items();
  return rec::LightGCNModel(g, dim, layers, gaussian(n * dim, 1.0, seed));
}

// Relative error with a floor on the magnitude so vanishing gradients are
// compared absolutely.
inline double rel_error(double analytic, double numeric, double floor = 1e-4) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

inline data::DatasetSplit synthetic_split(std::size_t users, std::size_t items,
                                          double mean_items, std::uint64_t seed) {
  data::SyntheticConfig sc;
  sc.num_users = users;
  sc.num_items = items;
  sc.mean_items_per_user = mean_items;
  sc.seed = seed;
  const auto raw = data::synthesize_ratings(sc);
  const auto pre = data::preprocess_implicit(raw, 3.0, 3);
  return data::split_holdout(pre.matrix, {}, seed);
}

}  // namespace cfx::testing
