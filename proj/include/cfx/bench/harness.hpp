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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfx/bench/config.hpp"

namespace cfx::bench {

struct ReportRow {
  std::string dataset;
  std::string recommender;
  std::string explainer;
  std::string format;
  std::string level;
  std::size_t k = 0;
  std::string scope;
  std::string metric;  // "unsupported" marks a skipped combination
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
  std::size_t failures = 0;
  double mean_wall_time_s = 0.0;
  std::size_t position = 0;  // positional breakdown only (1..K)
};

// One explanation call.
struct InstanceRecord {
  UserId user = 0;
  std::string explainer;
  explain::Format format = explain::Format::kImplicit;
  explain::Level level = explain::Level::kItem;
  std::size_t k = 0;
  std::string scope;
  std::size_t position = 0;  // 1..K at item level, 0 at list level
  std::optional<ItemId> target_item;
  std::vector<std::pair<ItemId, double>> mask;
  std::vector<EdgeId> removed;
  bool success = false;
  std::size_t queries_used = 0;
  double wall_time_s = 0.0;
  std::string error;  // non-empty when the explainer threw
  std::map<std::string, double> metrics;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  std::vector<InstanceRecord> instances;
  std::vector<UserId> users;
  std::vector<UserId> lxr_training_users;
};

struct PreparedData {
  data::InteractionMatrix matrix;
  data::DatasetSplit split;
};

// Raw file (or snapshot) -> filtered matrix -> 8:1:1 split.
PreparedData load_dataset(const DataSettings& settings);

std::shared_ptr<rec::Recommender> build_recommender(const ModelSettings& settings,
                                                    const data::DatasetSplit& split,
                                                    rec::TrainingLog* log = nullptr);

// Uniform sample without replacement among users with at least min_history
// training interactions, returned in ascending id order. Takes every
// eligible user (and sets *warning) when fewer than n qualify.
std::vector<UserId> sample_eval_users(const data::InteractionMatrix& matrix, std::size_t n,
                                      std::uint64_t seed, std::size_t min_history = 1,
                                      std::string* warning = nullptr);

class Experiment {
 public:
  Experiment(ExperimentConfig config, std::shared_ptr<const rec::Recommender> model);

  // Loads the data and trains (or loads) the recommender.
  static Experiment from_config(const ExperimentConfig& config);

  // Runs every configured explainer over the evaluation users. With
  // scope_only, explainers that ignore the scope are skipped.
  EvalReport evaluate(scope::ScopeKind scope, bool scope_only = false);

  const std::vector<UserId>& users() const { return users_; }
  const rec::Recommender& model() const { return *model_; }
  const ExperimentConfig& config() const { return config_; }

 private:
  ExperimentConfig config_;
  std::shared_ptr<const rec::Recommender> model_;
  std::vector<UserId> users_;
  std::vector<UserId> lxr_users_;
  std::vector<std::unique_ptr<explain::Explainer>> explainers_;
};

EvalReport run_experiment(const ExperimentConfig& config);

// Same model, users and seeds under each scope; rows carry the scope name.
EvalReport scope_ablation(const ExperimentConfig& config,
                          std::span<const scope::ScopeKind> scopes);

// Aggregate instance records into report rows (mean, population std).
std::vector<ReportRow> aggregate(const ExperimentConfig& config, std::string_view recommender,
                                 std::span<const InstanceRecord> instances);

// Item-level metrics grouped by original rank position.
std::vector<ReportRow> positional_breakdown(const ExperimentConfig& config,
                                            std::string_view recommender,
                                            std::span<const InstanceRecord> instances);

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

struct GridPoint {
  std::vector<std::pair<std::string, std::string>> assignment;
  double objective = 0.0;
};

struct GridResult {
  std::vector<GridPoint> points;  // lattice order, first axis outermost
  std::size_t best = 0;
  Config best_config;
};

// Exhaustive lattice search. Minimizes lower-is-better metrics (per
// metrics::higher_is_better), maximizes the rest; ties keep the earlier point.
GridResult grid_search(const Config& base, std::span<const GridAxis> axes,
                       std::string_view objective_metric,
                       const std::function<double(const Config&)>& evaluate);

// Objective = instance-weighted mean of the metric over all report rows,
// evaluated on a validation user sample drawn with a seed derived from
// eval.seed.
GridResult grid_search_experiment(const Config& base, std::span<const GridAxis> axes,
                                  std::string_view objective_metric);

}  // namespace cfx::bench
