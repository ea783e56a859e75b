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
#include <cmath>

#include "cfx/diff/adam.hpp"
#include "cfx/diff/gradients.hpp"
#include "cfx/explain/explainers.hpp"

namespace cfx::explain {
namespace {

struct TrainingPair {
  UserId user;
  ItemId target;
};

std::vector<ItemId> list_targets(const ExplanationTarget& target) {
  if (target.level == Level::kItem) return {*target.item};
  return target.original_top_k.items;
}

const rec::MFModel& as_mf(const ExplainContext& ctx) {
  const auto* mf = dynamic_cast<const rec::MFModel*>(ctx.model);
  if (mf == nullptr) throw DomainError("LXR explains MF recommenders only");
  return *mf;
}

}  // namespace

std::vector<double> lxr_input(const LxrNetwork& network, const rec::MFModel& model,
                              std::span<const ItemId> history,
                              std::span<const ItemId> target_items) {
  const std::size_t d = network.dim;
  std::vector<double> x(network.num_items + 2 * d, 0.0);
  for (ItemId i : history) x[i] = 1.0;
  const auto p = model.user_representation(history);
  std::copy(p.begin(), p.end(), x.begin() + static_cast<std::ptrdiff_t>(network.num_items));
  double* q = x.data() + network.num_items + d;
  if (!target_items.empty()) {
    const double inv = 1.0 / static_cast<double>(target_items.size());
    for (ItemId t : target_items) {
      const auto e = model.item_embedding(t);
      for (std::size_t c = 0; c < d; ++c) q[c] += inv * e[c];
    }
  }
  return x;
}

LxrNetwork train_lxr(const rec::MFModel& model, std::span<const UserId> training_users,
                     const LxrConfig& config) {
  if (config.hidden_dim == 0) throw ConfigError("lxr hidden_dim must be >= 1");
  if (config.batch_size == 0) throw ConfigError("lxr batch_size must be >= 1");
  const std::size_t ni = model.num_items();
  const std::size_t d = model.dim();
  LxrNetwork network;
  network.num_items = ni;
  network.dim = d;
  network.net = diff::TinyMLP::random(ni + 2 * d, config.hidden_dim, ni, config.seed);

  std::vector<TrainingPair> pairs;
  for (UserId u : training_users) {
    const auto state = model.original_state(u);
    if (state.history.empty()) continue;
    const rec::CandidatePool pool(ni, state.history);
    if (pool.size() == 0) continue;
    const auto top = model.top_k(state, pool, std::min(config.targets_per_user, pool.size()));
    for (ItemId t : top.items) pairs.push_back({u, t});
  }
  if (pairs.empty()) return network;

  auto params = diff::flatten(network.net);
  diff::Adam adam(params.size(), config.lr);
  auto grads = diff::MlpGradients::zeros_like(network.net);
  Rng rng(config.seed);
  std::vector<double> out_grad(ni, 0.0), w(0), wc(0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(pairs);
    for (std::size_t start = 0; start < pairs.size(); start += config.batch_size) {
      const std::size_t stop = std::min(pairs.size(), start + config.batch_size);
      grads.clear();
      for (std::size_t p = start; p < stop; ++p) {
        const auto row = model.graph().row(pairs[p].user);
        const std::span<const ItemId> hist(row.begin(), row.end());
        const ItemId t = pairs[p].target;
        const auto x = lxr_input(network, model, hist, std::span(&t, 1));
        const auto cache = diff::mlp_forward(network.net, x);
        const std::size_t n = hist.size();
        w.resize(n);
        wc.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
          w[j] = cache.output[hist[j]];
          wc[j] = 1.0 - w[j];
        }
        const auto gp = diff::grad_score_wrt_user_vector(model, hist, w, t);
        const auto gn = diff::grad_score_wrt_user_vector(model, hist, wc, t);
        const double loss = -config.lambda_pos * diff::score_mf_weighted(model, hist, w, t) +
                            config.lambda_neg * diff::score_mf_weighted(model, hist, wc, t);
        if (!std::isfinite(loss)) throw TrainingError(epoch, "LXR loss diverged");
        const double scale = 1.0 / static_cast<double>(stop - start);
        for (std::size_t j = 0; j < n; ++j) {
          out_grad[hist[j]] = scale * (-config.lambda_pos * gp[j] -
                                       config.lambda_neg * gn[j] +
                                       config.alpha_l1 / static_cast<double>(n));
        }
        diff::mlp_backward(network.net, cache, out_grad, grads);
        for (ItemId j : hist) out_grad[j] = 0.0;
      }
      const auto flat = diff::flatten(grads);
      for (double g : flat) {
        if (!std::isfinite(g)) throw TrainingError(epoch, "LXR gradient diverged");
      }
      adam.step(params, flat);
      diff::unflatten(params, network.net);
    }
  }
  return network;
}

ImplicitMask explain_lxr(const LxrNetwork& network, const ExplainContext& ctx,
                         const ExplanationTarget& target) {
  const auto& mf = as_mf(ctx);
  if (network.num_items != mf.num_items() || network.dim != mf.dim()) {
    throw ConfigError("LXR network does not match the recommender");
  }
  const auto targets = list_targets(target);
  const auto cache = diff::mlp_forward(network.net, lxr_input(network, mf, ctx.history, targets));
  ImplicitMask mask;
  mask.items = ctx.history;
  mask.scores.reserve(ctx.history.size());
  for (ItemId i : ctx.history) mask.scores.push_back(cache.output[i]);
  mask.queries_used = 0;
  return mask;
}

ExplicitPerturbation explain_lxr_explicit(const LxrNetwork& network,
                                          const ExplainContext& ctx,
                                          const ExplanationTarget& target) {
  const auto mask = explain_lxr(network, ctx, target);
  std::vector<ItemId> chosen;
  for (std::size_t j = 0; j < mask.items.size(); ++j) {
    if (mask.scores[j] > 0.5) chosen.push_back(mask.items[j]);
  }
  ExplicitPerturbation out;
  out.removed = user_edges(ctx, chosen);
  if (!chosen.empty()) {
    out.success =
        is_counterfactual(ctx, ctx.state_with(rec::remove_items(ctx.history, chosen)), target);
    out.queries_used = 1;
  }
  return out;
}

}  // namespace cfx::explain
