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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cfx/diff/mlp.hpp"
#include "cfx/explain/types.hpp"
#include "cfx/rec/lightgcn.hpp"
#include "cfx/rec/mf.hpp"

namespace cfx::explain {

// ---------------------------------------------------------------------------
// Perturbation sequences for POS-P / NEG-P.

struct PerturbationSequence {
  // kept[t-1] is the history retained at step t (t = 1..T), sorted.
  std::vector<std::vector<ItemId>> pos;
  std::vector<std::vector<ItemId>> neg;
};

// Items removed by step t: round-half-up(t * n / T).
std::size_t removal_count(std::size_t n, std::size_t t, std::size_t steps);

// pos drops the highest-scored interactions first, neg the lowest; ties go
// by ascending item index in both.
PerturbationSequence build_perturbation_sequence(const ImplicitMask& mask,
                                                 std::size_t steps);

// ---------------------------------------------------------------------------
// LIME-RS

struct LimeConfig {
  std::size_t n_samples = 200;
  double kernel_width = 0.75;
  double keep_prob = 0.5;
  double ridge = 1e-3;
  std::uint64_t seed = 7;
};

// Weighted ridge surrogate over binary keep/drop vectors of the history.
// Sample s keeps interaction j iff hash(seed, item_j, s) < keep_prob, so the
// draw of each interaction is independent of history order. Sample 0 is the
// unperturbed history.
ImplicitMask explain_lime_rs(const ExplainContext& ctx,
                             const ExplanationTarget& target,
                             const LimeConfig& config);

// ---------------------------------------------------------------------------
// SHAP

struct ShapConfig {
  std::size_t n_permutations = 64;  // antithetic pairs count as two
  std::size_t exact_limit = 12;     // enumerate all subsets up to this size
  std::uint64_t seed = 11;
};

ImplicitMask explain_shap(const ExplainContext& ctx,
                          const ExplanationTarget& target,
                          const ShapConfig& config);

// Exact Shapley values of an arbitrary set function given as a table
// v[mask] over all 2^n subsets (bit j = player j present).
std::vector<double> exact_shapley(std::size_t n, std::span<const double> values);

// ---------------------------------------------------------------------------
// PRINCE

struct PrinceConfig {
  double alpha = 0.15;  // restart probability
  double ppr_eps = 1e-10;
  std::size_t max_iterations = 1000;
  std::size_t max_removals = 0;  // 0 = whole history
};

// Personalized PageRank on the bipartite graph (users 0..U-1, items U..U+I-1)
// with restart at `source`. Dangling mass returns to the source. Iterates
// until the L1 change drops below eps.
std::vector<double> personalized_pagerank(const data::InteractionMatrix& graph,
                                          std::size_t source, double alpha,
                                          double eps,
                                          std::size_t max_iterations = 1000);

ExplicitPerturbation explain_prince(const ExplainContext& ctx,
                                    const ExplanationTarget& target,
                                    const PrinceConfig& config);

// ---------------------------------------------------------------------------
// ACCENT

struct AccentConfig {
  std::size_t max_removals = 0;  // 0 = whole history
};

struct AccentResult {
  ExplicitPerturbation perturbation;
  ImplicitMask mask;  // first-pass gap reductions
};

// Item level only; a list-level target throws DomainError.
AccentResult explain_accent(const ExplainContext& ctx,
                            const ExplanationTarget& target,
                            const AccentConfig& config);

// ---------------------------------------------------------------------------
// LXR

struct LxrConfig {
  std::size_t hidden_dim = 64;
  double lambda_pos = 1.0;
  double lambda_neg = 1.0;
  double alpha_l1 = 0.05;
  int epochs = 10;
  double lr = 0.005;
  std::size_t batch_size = 32;
  std::size_t targets_per_user = 5;
  std::uint64_t seed = 5;
};

// Explainer network: input [x_u, p_u, q_t] with x_u the binary interaction
// vector, p_u the fold-in user representation and q_t the target embedding
// (mean of the top-K embeddings at list level); output a sigmoid mask over
// all items.
struct LxrNetwork {
  diff::TinyMLP net;
  std::size_t num_items = 0;
  std::size_t dim = 0;
};

LxrNetwork train_lxr(const rec::MFModel& model,
                     std::span<const UserId> training_users,
                     const LxrConfig& config);

std::vector<double> lxr_input(const LxrNetwork& network, const rec::MFModel& model,
                              std::span<const ItemId> history,
                              std::span<const ItemId> target_items);

ImplicitMask explain_lxr(const LxrNetwork& network, const ExplainContext& ctx,
                         const ExplanationTarget& target);

// History interactions whose raw mask value exceeds 0.5.
ExplicitPerturbation explain_lxr_explicit(const LxrNetwork& network,
                                          const ExplainContext& ctx,
                                          const ExplanationTarget& target);

// ---------------------------------------------------------------------------
// Mask optimization on LightGCN (CF-GNNExplainer, CF^2, C2Explainer).

enum class CfVariant { kCfGnn, kCf2, kC2Ste };

struct CfMaskConfig {
  CfVariant variant = CfVariant::kCfGnn;
  std::size_t steps = 100;
  double lr = 0.1;
  double beta = 0.5;        // weight of the mean kept-edge deficit
  double margin = 0.01;     // fraction of the score scale
  double init_logit = 2.0;  // initial mask ~ sigmoid(2) = 0.88
  std::uint64_t seed = 3;
};

struct CfMaskTrace {
  // Size of the best valid perturbation after each step (0 = none yet).
  std::vector<std::size_t> best_size;
};

// Edges in ctx.scope are optimized; all others keep weight 1. Throws
// DegenerateError when the scope is empty. c2ste falls back to the last hard
// mask that flipped when the final threshold does not.
ExplicitPerturbation explain_cf_mask(const rec::LightGCNModel& model,
                                     const ExplainContext& ctx,
                                     const ExplanationTarget& target,
                                     const CfMaskConfig& config,
                                     CfMaskTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// UNR-Explainer (MCTS over connected edge subsets rooted at the user).

struct UnrConfig {
  std::size_t n_iterations = 100;
  double c_uct = 1.0;
  std::size_t max_size = 5;
  std::uint64_t seed = 13;
};

// Reward of removing a subset: fraction of the original top-K displaced
// (item level: 1 when the target is displaced).
double unr_reward(const ExplainContext& ctx, const ExplanationTarget& target,
                  std::span<const EdgeId> removed);

ExplicitPerturbation explain_unr(const ExplainContext& ctx,
                                 const ExplanationTarget& target,
                                 const UnrConfig& config);

// ---------------------------------------------------------------------------
// Baselines.

// Uniform random scores per interaction, keyed by (seed, item).
ImplicitMask explain_random(const ExplainContext& ctx, std::uint64_t seed);

}  // namespace cfx::explain
