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

#include <chrono>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cfx/explain/explainers.hpp"

namespace cfx::metrics {

inline constexpr std::string_view kPosP = "pos_p";
inline constexpr std::string_view kNegP = "neg_p";
inline constexpr std::string_view kPnS = "pn_s";
inline constexpr std::string_view kPnR = "pn_r";
inline constexpr std::string_view kGini = "gini";
inline constexpr std::string_view kNumPerturb = "num_perturb";
inline constexpr std::string_view kWallTime = "wall_time_s";

bool higher_is_better(std::string_view metric);

// Rank-based building blocks. `ranks` holds the rank of each original top-K
// item (position order) under some perturbed state.

// (1/T) sum over steps of the in-top-K flag.
double presence_fraction(const std::vector<bool>& in_top_k);

// (1/TK) sum over steps and positions of 1[rank <= K].
double presence_fraction_list(std::span<const std::vector<std::size_t>> ranks_per_step,
                              std::size_t k);

double pn_s_from_ranks(std::span<const std::size_t> ranks, std::size_t k);

double pn_r_from_ranks(std::span<const std::size_t> ranks, std::size_t k);

// Model-facing forms.

double pos_p_item(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq, ItemId target, std::size_t k);
double neg_p_item(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq, ItemId target, std::size_t k);
double pos_p_list(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq,
                  std::span<const ItemId> original_top_k, std::size_t k);
double neg_p_list(const explain::ExplainContext& ctx,
                  const explain::PerturbationSequence& seq,
                  std::span<const ItemId> original_top_k, std::size_t k);

// Ranks of the given items under a state, candidate pool fixed by ctx.
std::vector<std::size_t> ranks_under(const explain::ExplainContext& ctx,
                                     const rec::UserState& state,
                                     std::span<const ItemId> items);

double pn_s_item(const explain::ExplainContext& ctx, const rec::UserState& perturbed,
                 ItemId target, std::size_t k);
double pn_s_list(const explain::ExplainContext& ctx, const rec::UserState& perturbed,
                 std::span<const ItemId> original_top_k, std::size_t k);
double pn_r(const explain::ExplainContext& ctx, const rec::UserState& perturbed,
            std::span<const ItemId> original_top_k, std::size_t k);

// Min-max normalize, sort ascending, 1 - 2 sum_k (m_k/|m|_1)(n-k+0.5)/n with k
// 1-based. All-equal scores give 0.
double gini(std::span<const double> scores);

// Literal: flips over the history only. Symmetric also counts added
// entries outside the history.
enum class PerturbMode { kLiteral, kSymmetric };

std::size_t num_perturb(std::span<const ItemId> history, std::span<const ItemId> perturbed,
                        PerturbMode mode = PerturbMode::kLiteral);

// Graph form: every removed edge counts (user edges and others); added edges
// count in symmetric mode only.
std::size_t num_perturb(const explain::ExplicitPerturbation& p,
                        PerturbMode mode = PerturbMode::kLiteral);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <typename F>
double wall_time(F&& fn) {
  Stopwatch w;
  fn();
  return w.seconds();
}

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
};

Summary summarize(std::span<const double> values);

}  // namespace cfx::metrics
