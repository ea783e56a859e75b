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

#include <span>
#include <utility>
#include <vector>

#include "cfx/rec/lightgcn.hpp"
#include "cfx/rec/mf.hpp"

namespace cfx::diff {

// Partial derivatives d score / d w_e, aligned with the mask they
// differentiate.
struct MaskGradient {
  std::vector<double> entries;
};

// MF score under a continuous relaxation of the history: each interaction j
// carries a weight w_j in [0, 1] and the user vector is the weight-normalized
// mean  p = sum_j w_j Q_j / sum_j w_j.  With sum w = 0 the score is b_i.
double score_mf_weighted(const rec::MFModel& model,
                         std::span<const ItemId> history,
                         std::span<const double> weights, ItemId item);

// d score / d w_j = (Q_j . Q_i - p . Q_i) / sum_w. A single interaction
// gets 0 since the normalization cancels its weight.
std::vector<double> grad_score_wrt_user_vector(const rec::MFModel& model,
                                               std::span<const ItemId> history,
                                               std::span<const double> weights,
                                               ItemId item);

// Unit-weight convenience overload.
std::vector<double> grad_score_wrt_user_vector(const rec::MFModel& model,
                                               std::span<const ItemId> history,
                                               ItemId item);

// Gradient with respect to every edge weight of
//   sum_k coef_k * score(u, item_k)
// under the masked propagation (mask over all edges, empty = ones). Reverse
// accumulation through the L layers with frozen normalization.
MaskGradient grad_scores_wrt_edge_mask(
    const rec::LightGCNModel& model, std::span<const double> mask, UserId user,
    std::span<const std::pair<ItemId, double>> weighted_items);

MaskGradient grad_score_wrt_edge_mask(const rec::LightGCNModel& model,
                                      std::span<const double> mask, UserId user,
                                      ItemId item);

// Same gradient when only `scope` edges are free: `scope_mask[k]` is the
// weight of edge scope[k], every other edge has weight 1. The result is
// aligned with `scope`.
MaskGradient grad_score_wrt_scope_mask(const rec::LightGCNModel& model,
                                       std::span<const EdgeId> scope,
                                       std::span<const double> scope_mask,
                                       UserId user, ItemId item);

// Expands a scope mask into a full per-edge mask.
std::vector<double> expand_scope_mask(const rec::LightGCNModel& model,
                                      std::span<const EdgeId> scope,
                                      std::span<const double> scope_mask);

}  // namespace cfx::diff
