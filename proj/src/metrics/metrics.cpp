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

#include "cfx/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace cfx::metrics {

bool higher_is_better(std::string_view metric) {
  return metric == kNegP || metric == kPnS || metric == kPnR || metric == kGini;
}

double presence_fraction(const std::vector<bool>& in_top_k) {
  if (in_top_k.empty()) throw DomainError("perturbation sequence is empty");
  std::size_t hits = 0;
  for (bool b : in_top_k) hits += b ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(in_top_k.size());
}

double presence_fraction_list(std::span<const std::vector<std::size_t>> ranks_per_step,
                              std::size_t k) {
  if (ranks_per_step.empty()) throw DomainError("perturbation sequence is empty");
  std::size_t hits = 0, total = 0;
  for (const auto& ranks : ranks_per_step) {
    for (std::size_t r : ranks) hits += r <= k ? 1 : 0;
    total += ranks.size();
  }
  if (total == 0) throw DomainError("original top-K is empty");
  return static_cast<double>(hits) / static_cast<double>(total);
}

double pn_s_from_ranks(std::span<const std::size_t> ranks, std::size_t k) {
  if (ranks.empty()) throw DomainError("original top-K is empty");
  std::size_t out = 0;
  for (std::size_t r : ranks) out += r > k ? 1 : 0;
  return static_cast<double>(out) / static_cast<double>(ranks.size());
}

double pn_r_from_ranks(std::span<const std::size_t> ranks, std::size_t k) {
  if (ranks.empty()) throw DomainError("original top-K is empty");
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < ranks.size(); ++p) {
    den += 1.0 / std::log2(static_cast<double>(p + 2));
    if (ranks[p] <= k) num += 1.0 / std::log2(static_cast<double>(ranks[p] + 1));
  }
  return 1.0 - num / den;
}

std::vector<std::size_t> ranks_under(const explain::ExplainContext& ctx,
                                     const rec::UserState& state,
                                     std::span<const ItemId> items) {
  const auto scores = ctx.model->score_all(state);
  std::vector<std::size_t> out;
  out.reserve(items.size());
  for (ItemId i : items) out.push_back(rec::rank_of(scores, ctx.pool, i));
  return out;
}

namespace {

double presence_item(const explain::ExplainContext& ctx,
                     const std::vector<std::vector<ItemId>>& steps, ItemId target,
                     std::size_t k) {
  std::vector<bool> flags;
  flags.reserve(steps.size());
  for (const auto& kept : steps) {
    flags.push_back(ranks_under(ctx, ctx.state_with(kept), std::span(&target, 1))[0] <= k);
  }
  return presence_fraction(flags);
}

double presence_list(const explain::ExplainContext& ctx,
                     const std::vector<std::vector<ItemId>>& steps,
                     std::span<const ItemId> top, std::size_t k) {
  std::vector<std::vector<std::size_t>> ranks;
  ranks.reserve(steps.size());
  for (const auto& kept : steps) ranks.push_back(ranks_under(ctx, ctx.state_with(kept), top));
  return presence_fraction_list(ranks, k);
}

}  // namespace

double pos_p_item(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq, ItemId target, std::size_t k) {
  return presence_item(ctx, seq.pos, target, k);
}

double neg_p_item(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq, ItemId target, std::size_t k) {
  return presence_item(ctx, seq.neg, target, k);
}

double pos_p_list(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq,
                  std::span<const ItemId> original_top_k, std::size_t k) {
  return presence_list(ctx, seq.pos, original_top_k, k);
}

double neg_p_list(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq,
                  std::span<const ItemId> original_top_k, std::size_t k) {
  return presence_list(ctx, seq.neg, original_top_k, k);
}

double pn_s_item(const explain::ExplainContext& ctx, const rec::UserState& perturbed,
                 ItemId target, std::size_t k) {
  return ranks_under(ctx, perturbed, std::span(&target, 1))[0] > k ? 1.0 : 0.0;
}

double pn_s_list(const explain::ExplainContext& ctx, const rec::UserState& perturbed,
                 std::span<const ItemId> original_top_k, std::size_t k) {
  return pn_s_from_ranks(ranks_under(ctx, perturbed, original_top_k), k);
}

double pn_r(const explain::ExplainContext& ctx, const rec::UserState& perturbed,
            std::span<const ItemId> original_top_k, std::size_t k) {
  return pn_r_from_ranks(ranks_under(ctx, perturbed, original_top_k), k);
}

double gini(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n == 0) throw DomainError("Gini of an empty mask");
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return 0.0;
  std::vector<double> m(n);
  for (std::size_t j = 0; j < n; ++j) m[j] = (scores[j] - *lo) / range;
  std::sort(m.begin(), m.end());
  double l1 = 0.0;
  for (double v : m) l1 += v;
  double acc = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    acc += (m[j] / l1) * ((nn - static_cast<double>(j + 1) + 0.5) / nn);
  }
  return 1.0 - 2.0 * acc;
}

std::size_t num_perturb(std::span<const ItemId> history, std::span<const ItemId> perturbed,
                        PerturbMode mode) {
  std::vector<ItemId> a(history.begin(), history.end()), b(perturbed.begin(), perturbed.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<ItemId> diff;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  std::size_t count = diff.size();
  if (mode == PerturbMode::kSymmetric) {
    diff.clear();
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(diff));
    count += diff.size();
  }
  return count;
}

std::size_t num_perturb(const explain::ExplicitPerturbation& p, PerturbMode mode) {
  return p.removed.size() + (mode == PerturbMode::kSymmetric ? p.added.size() : 0);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.n);
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(s.n));
  return s;
}

}  // namespace cfx::metrics
