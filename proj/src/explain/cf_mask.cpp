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
#include <utility>

#include "cfx/diff/adam.hpp"
#include "cfx/diff/gradients.hpp"
#include "cfx/explain/explainers.hpp"

namespace cfx::explain {
namespace {

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

std::vector<double> user_scores(const rec::LightGCNModel& model,
                                std::span<const double> full_mask, UserId user) {
  const auto prop = model.propagate(full_mask);
  const std::size_t ni = model.num_items();
  std::vector<double> s(ni);
  const auto fu = prop.final.user(user);
  for (std::size_t i = 0; i < ni; ++i) {
    const auto fi = prop.final.item(static_cast<ItemId>(i));
    double acc = 0.0;
    for (std::size_t c = 0; c < fu.size(); ++c) acc += fu[c] * fi[c];
    s[i] = acc;
  }
  return s;
}

// Hinge terms of the flip loss as (item, coefficient) pairs for the gradient;
// returns the loss value.
double flip_loss(std::span<const double> scores, const ExplainContext& ctx,
                 const ExplanationTarget& target, double margin, double scale,
                 std::vector<std::pair<ItemId, double>>& terms) {
  terms.clear();
  if (target.level == Level::kItem) {
    const ItemId t = *target.item;
    const ItemId ref = replacement_item(scores, ctx.pool, t, target.k);
    const double h = scores[t] - scores[ref] + margin;
    if (h <= 0.0 || ref == t) return 0.0;
    terms.emplace_back(t, 1.0 / scale);
    terms.emplace_back(ref, -1.0 / scale);
    return h / scale;
  }
  const auto& orig = target.original_top_k.items;
  ItemId ref;
  if (!rec::best_candidate_excluding(scores, ctx.pool, orig, ref)) return 0.0;
  const double inv = 1.0 / (static_cast<double>(orig.size()) * scale);
  double loss = 0.0, ref_coef = 0.0;
  for (ItemId i : orig) {
    const double h = scores[i] - scores[ref] + margin;
    if (h <= 0.0) continue;
    loss += h * inv;
    terms.emplace_back(i, inv);
    ref_coef -= inv;
  }
  if (ref_coef != 0.0) terms.emplace_back(ref, ref_coef);
  return loss;
}

}  // namespace

ExplicitPerturbation explain_cf_mask(const rec::LightGCNModel& model,
                                     const ExplainContext& ctx,
                                     const ExplanationTarget& target,
                                     const CfMaskConfig& config,
                                     CfMaskTrace* trace) {
  const std::size_t n = ctx.scope.size();
  if (n == 0) throw DegenerateError("CF mask optimization needs a non-empty scope");
  if (config.steps == 0) throw ConfigError("cf steps must be >= 1");

  const auto& top = target.original_top_k;
  double scale = 0.0;
  for (double s : top.scores) scale += std::abs(s);
  scale = top.scores.empty() ? 1.0 : scale / static_cast<double>(top.scores.size());
  if (!(scale > 0.0)) scale = 1.0;
  const double margin = config.margin * scale;

  std::vector<double> theta(n, config.init_logit), w(n), forward(n), grad(n);
  diff::Adam adam(n, config.lr);
  std::vector<std::pair<ItemId, double>> terms;

  ExplicitPerturbation out;
  std::vector<EdgeId> best;
  bool have_best = false;
  std::vector<EdgeId> last_checked;
  bool last_valid = false, checked_any = false;

  const auto thresholded = [&]() {
    std::vector<EdgeId> removed;
    for (std::size_t k = 0; k < n; ++k) {
      if (sigmoid(theta[k]) < 0.5) removed.push_back(ctx.scope[k]);
    }
    std::sort(removed.begin(), removed.end());
    return removed;
  };
  const auto verify = [&](const std::vector<EdgeId>& removed) {
    if (checked_any && removed == last_checked) return last_valid;
    ++out.queries_used;
    last_checked = removed;
    checked_any = true;
    last_valid = !removed.empty() &&
                 is_counterfactual(ctx, ctx.state_without_edges(removed), target);
    return last_valid;
  };

  for (std::size_t step = 0; step < config.steps; ++step) {
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = sigmoid(theta[k]);
      forward[k] = config.variant == CfVariant::kC2Ste ? (w[k] < 0.5 ? 0.0 : 1.0) : w[k];
    }
    const auto full = diff::expand_scope_mask(model, ctx.scope, forward);
    const auto scores = user_scores(model, full, ctx.user);
    flip_loss(scores, ctx, target, margin, scale, terms);
    if (config.variant == CfVariant::kC2Ste && terms.empty()) {
      // hard forward already flips; remember it, the sparsity pull can undo it later
      std::vector<EdgeId> removed;
      for (std::size_t k = 0; k < n; ++k) {
        if (forward[k] == 0.0) removed.push_back(ctx.scope[k]);
      }
      std::sort(removed.begin(), removed.end());
      if (verify(removed)) {
        best = removed;
        have_best = true;
      }
    }
    std::fill(grad.begin(), grad.end(), -config.beta / static_cast<double>(n));
    if (!terms.empty()) {
      const auto g = diff::grad_scores_wrt_edge_mask(model, full, ctx.user, terms);
      for (std::size_t k = 0; k < n; ++k) grad[k] += g.entries[ctx.scope[k]];
    }
    // d w / d theta; the straight-through variant treats the hard step as identity.
    for (std::size_t k = 0; k < n; ++k) grad[k] *= w[k] * (1.0 - w[k]);
    adam.step(theta, grad);

    if (config.variant == CfVariant::kCfGnn) {
      const auto removed = thresholded();
      if (!removed.empty() && (!have_best || removed.size() < best.size()) &&
          verify(removed)) {
        best = removed;
        have_best = true;
      }
    }
    if (trace != nullptr) trace->best_size.push_back(have_best ? best.size() : 0);
  }

  if (config.variant == CfVariant::kCfGnn) {
    if (have_best) {
      out.removed = best;
      out.success = true;
    }
    return out;
  }
  out.removed = thresholded();
  out.success = verify(out.removed);
  if (!out.success && have_best) {
    out.removed = best;
    out.success = true;
  }
  return out;
}

}  // namespace cfx::explain
