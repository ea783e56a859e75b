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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cfx/data/interactions.hpp"
#include "cfx/explain/registry.hpp"
#include "cfx/metrics/metrics.hpp"
#include "cfx/rec/lightgcn.hpp"
#include "cfx/rec/mf.hpp"
#include "cfx/scope/scope.hpp"

namespace cfx::bench {

// Flat key-value configuration. Text form:
//
//   # comment
//   [section]
//   key = value
//
// Keys are addressed as "section.key". Only keys listed in default_entries()
// are accepted.
class Config {
 public:
  Config();  // all defaults

  static Config parse(std::istream& in);
  static Config load(const std::filesystem::path& path);

  static const std::map<std::string, std::string>& default_entries();

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;

  std::string str(const std::string& key) const { return get(key); }
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // non-negative integer
  bool flag(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;  // comma-separated

  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Sectioned text form; parse(write(c)) == c.
  void write(std::ostream& out) const;

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::map<std::string, std::string> entries_;
};

struct DataSettings {
  std::string name = "dataset";
  std::string path;
  data::RatingFormat format = data::RatingFormat::kTsv;
  std::string snapshot;
  double threshold = 3.0;
  std::size_t min_degree = 3;
  std::uint64_t split_seed = 42;
};

struct ModelSettings {
  rec::ModelKind kind = rec::ModelKind::kMF;
  std::string checkpoint;  // load instead of training when set
  rec::MFConfig mf;
  rec::LightGCNConfig lightgcn;
};

struct EvalSettings {
  std::vector<std::size_t> ks{3, 5};
  std::size_t steps = 10;
  std::vector<explain::Level> levels{explain::Level::kItem, explain::Level::kList};
  std::vector<explain::Format> formats{explain::Format::kImplicit,
                                       explain::Format::kExplicit};
  std::size_t n_users = 500;
  std::vector<UserId> users;  // explicit evaluation users; overrides sampling
  std::size_t min_history = 1;
  std::uint64_t seed = 2024;
  scope::ScopeKind scope = scope::ScopeKind::kKHop;
  std::size_t hops = 0;  // 0 = number of propagation layers
  std::size_t lxr_train_users = 0;  // 0 = every non-evaluation user
  metrics::PerturbMode perturb_mode = metrics::PerturbMode::kLiteral;
  std::size_t threads = 0;  // 0 = hardware concurrency, capped by CFX_THREADS
};

struct OutputSettings {
  std::string csv;
  std::string json;
  std::string positions_csv;
  std::string instances;  // JSON lines
};

struct ExperimentConfig {
  DataSettings data;
  ModelSettings model;
  std::vector<std::string> explainers;
  explain::ExplainerSettings explainer;
  EvalSettings eval;
  OutputSettings output;
};

ExperimentConfig to_experiment(const Config& config);

// Worker count: requested (0 = hardware), capped by CFX_THREADS when set.
std::size_t resolve_threads(std::size_t requested);

}  // namespace cfx::bench
