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

#include "cfx/bench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include <fmt/core.h>

#include "cfx/rec/checkpoint.hpp"

namespace cfx::bench {
namespace {

using explain::Format;
using explain::Level;

struct Combo {
  std::size_t explainer = 0;
  Format format = Format::kImplicit;
  Level level = Level::kItem;
  std::size_t k = 0;
  bool supported = false;
};

std::vector<std::string_view> metric_names(Format f, Level l) {
  if (f == Format::kImplicit) {
    return {metrics::kPosP, metrics::kNegP, metrics::kGini, metrics::kWallTime};
  }
  if (l == Level::kItem) return {metrics::kPnS, metrics::kNumPerturb, metrics::kWallTime};
  return {metrics::kPnS, metrics::kPnR, metrics::kNumPerturb, metrics::kWallTime};
}

template <typename F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

using GroupKey = std::tuple<std::string, Format, Level, std::size_t, std::string, std::size_t>;

std::vector<ReportRow> group_rows(const ExperimentConfig& config, std::string_view recommender,
                                  std::span<const InstanceRecord> instances, bool by_position) {
  std::vector<GroupKey> order;
  std::map<GroupKey, std::vector<const InstanceRecord*>> groups;
  for (const auto& inst : instances) {
    if (by_position && inst.level != Level::kItem) continue;
    GroupKey key{inst.explainer, inst.format, inst.level, inst.k, inst.scope,
                 by_position ? inst.position : 0};
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(&inst);
  }
  if (by_position) std::stable_sort(order.begin(), order.end());

  std::vector<ReportRow> rows;
  for (const auto& key : order) {
    const auto& members = groups[key];
    const auto& [name, format, level, k, scope, position] = key;
    double wall = 0.0;
    std::size_t timed = 0;
    for (const auto* r : members) {
      if (r->error.empty()) {
        wall += r->wall_time_s;
        ++timed;
      }
    }
    for (std::string_view metric : metric_names(format, level)) {
      std::vector<double> values;
      for (const auto* r : members) {
        const auto it = r->metrics.find(std::string(metric));
        if (it != r->metrics.end()) values.push_back(it->second);
      }
      const auto s = metrics::summarize(values);
      ReportRow row;
      row.dataset = config.data.name;
      row.recommender = std::string(recommender);
      row.explainer = name;
      row.format = std::string(explain::format_name(format));
      row.level = std::string(explain::level_name(level));
      row.k = k;
      row.scope = scope;
      row.metric = std::string(metric);
      row.mean = s.mean;
      row.std = s.std;
      row.n = s.n;
      row.failures = members.size() - s.n;
      row.mean_wall_time_s = timed == 0 ? 0.0 : wall / static_cast<double>(timed);
      row.position = position;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

PreparedData load_dataset(const DataSettings& settings) {
  PreparedData out;
  if (!settings.snapshot.empty()) {
    out.matrix = data::read_snapshot(settings.snapshot);
  } else {
    if (settings.path.empty()) throw ConfigError("data.path or data.snapshot is required");
    const auto raw = data::load_interactions(settings.path, settings.format);
    out.matrix = data::preprocess_implicit(raw, settings.threshold, settings.min_degree).matrix;
  }
  out.split = data::split_holdout(out.matrix, data::SplitRatios{}, settings.split_seed);
  return out;
}

std::shared_ptr<rec::Recommender> build_recommender(const ModelSettings& settings,
                                                    const data::DatasetSplit& split,
                                                    rec::TrainingLog* log) {
  if (!settings.checkpoint.empty()) {
    std::shared_ptr<rec::Recommender> model = rec::load_model(settings.checkpoint);
    if (model->graph() != split.train) {
      throw ConfigError("checkpoint was trained on a different split");
    }
    return model;
  }
  if (settings.kind == rec::ModelKind::kMF) {
    return std::make_shared<rec::MFModel>(rec::train_mf(split, settings.mf, log));
  }
  return std::make_shared<rec::LightGCNModel>(rec::train_lightgcn(split, settings.lightgcn, log));
}

std::vector<UserId> sample_eval_users(const data::InteractionMatrix& matrix, std::size_t n,
                                      std::uint64_t seed, std::size_t min_history,
                                      std::string* warning) {
  if (min_history == 0) throw ConfigError("min_history must be >= 1");
  std::vector<UserId> eligible;
  for (std::size_t u = 0; u < matrix.num_users(); ++u) {
    if (matrix.row(static_cast<UserId>(u)).size() >= min_history) {
      eligible.push_back(static_cast<UserId>(u));
    }
  }
  if (eligible.size() <= n) {
    if (eligible.size() < n && warning != nullptr) {
      *warning = fmt::format("only {} eligible users, evaluating all of them", eligible.size());
    }
    return eligible;
  }
  Rng rng(seed);
  // Partial Fisher-Yates: the first n slots are the sample.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.index(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(n);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

Experiment::Experiment(ExperimentConfig config, std::shared_ptr<const rec::Recommender> model)
    : config_(std::move(config)), model_(std::move(model)) {
  if (!model_) throw ConfigError("experiment needs a recommender");
  if (!config_.eval.users.empty()) {
    users_ = config_.eval.users;
    std::sort(users_.begin(), users_.end());
    users_.erase(std::unique(users_.begin(), users_.end()), users_.end());
    if (users_.back() >= model_->num_users()) throw ConfigError("eval.users: id out of range");
  } else {
    std::string warning;
    users_ = sample_eval_users(model_->graph(), config_.eval.n_users, config_.eval.seed,
                               config_.eval.min_history, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
  }

  for (const auto& name : config_.explainers) {
    auto e = explain::make_explainer(name, config_.explainer);
    bool usable = false;
    for (Format f : config_.eval.formats) {
      for (Level l : config_.eval.levels) usable = usable || e->supports(f, l, model_->kind());
    }
    if (usable && e->needs_training_users()) {
      if (lxr_users_.empty()) {
        const auto& g = model_->graph();
        for (std::size_t u = 0; u < g.num_users(); ++u) {
          const auto id = static_cast<UserId>(u);
          if (!g.row(id).empty() && !std::binary_search(users_.begin(), users_.end(), id)) {
            lxr_users_.push_back(id);
          }
        }
        const std::size_t cap = config_.eval.lxr_train_users;
        if (cap != 0 && cap < lxr_users_.size()) {
          Rng rng(mix_seed(config_.eval.seed, 0x4c5852));
          rng.shuffle(lxr_users_);
          lxr_users_.resize(cap);
          std::sort(lxr_users_.begin(), lxr_users_.end());
        }
      }
      e->prepare(*model_, lxr_users_);
    }
    explainers_.push_back(std::move(e));
  }
}

Experiment Experiment::from_config(const ExperimentConfig& config) {
  const auto prepared = load_dataset(config.data);
  auto model = build_recommender(config.model, prepared.split);
  return Experiment(config, std::move(model));
}

EvalReport Experiment::evaluate(scope::ScopeKind scope_kind, bool scope_only) {
  const auto& cfg = config_;
  const auto kind = model_->kind();
  std::vector<Combo> combos;
  for (std::size_t e = 0; e < explainers_.size(); ++e) {
    if (scope_only && !explainers_[e]->uses_scope()) continue;
    for (Format f : cfg.eval.formats) {
      for (Level l : cfg.eval.levels) {
        for (std::size_t k : cfg.eval.ks) {
          combos.push_back({e, f, l, k, explainers_[e]->supports(f, l, kind)});
        }
      }
    }
  }
  std::size_t hops = cfg.eval.hops;
  if (hops == 0) {
    const auto* gcn = dynamic_cast<const rec::LightGCNModel*>(model_.get());
    hops = gcn != nullptr ? gcn->layers() : 1;
  }
  const std::string scope_label(scope::scope_kind_name(scope_kind));
  const std::string model_label(rec::model_kind_name(kind));

  // per_user[u][c] holds the instances of combo c for user u.
  std::vector<std::vector<std::vector<InstanceRecord>>> per_user(users_.size());
  parallel_for(users_.size(), resolve_threads(cfg.eval.threads), [&](std::size_t ui) {
    const UserId user = users_[ui];
    const auto base = explain::ExplainContext::make(*model_, user);
    const auto original = base.original_state();
    const auto ranking = model_->rank(original, base.pool);
    auto& out = per_user[ui];
    out.resize(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
      const Combo& combo = combos[c];
      if (!combo.supported) continue;
      const auto& explainer = *explainers_[combo.explainer];
      rec::RankedList top;
      const std::size_t take = std::min(combo.k, ranking.size());
      top.items.assign(ranking.items.begin(), ranking.items.begin() + static_cast<std::ptrdiff_t>(take));
      top.scores.assign(ranking.scores.begin(), ranking.scores.begin() + static_cast<std::ptrdiff_t>(take));

      std::vector<std::size_t> positions;
      if (combo.level == Level::kItem) {
        for (std::size_t p = 1; p <= combo.k; ++p) positions.push_back(p);
      } else {
        positions.push_back(0);
      }
      for (std::size_t position : positions) {
        InstanceRecord inst;
        inst.user = user;
        inst.explainer = std::string(explainer.name());
        inst.format = combo.format;
        inst.level = combo.level;
        inst.k = combo.k;
        inst.scope = explainer.uses_scope() ? scope_label : "full";
        inst.position = position;
        try {
          if (top.size() < combo.k) throw DegenerateError("fewer than K candidates");
          const auto target = combo.level == Level::kItem
                                  ? explain::ExplanationTarget::item_level(top, combo.k, position)
                                  : explain::ExplanationTarget::list_level(top, combo.k);
          inst.target_item = target.item;
          explain::ExplainContext ctx = base;
          if (explainer.uses_scope()) {
            const auto targets = combo.level == Level::kItem
                                     ? std::vector<ItemId>{*target.item}
                                     : top.items;
            ctx.scope = scope::extract_scope(model_->graph(), user, targets, scope_kind, hops).edges;
          }
          if (combo.format == Format::kImplicit) {
            explain::ImplicitMask mask;
            inst.wall_time_s = metrics::wall_time([&] { mask = explainer.explain_implicit(ctx, target); });
            inst.queries_used = mask.queries_used;
            for (std::size_t j = 0; j < mask.items.size(); ++j) {
              inst.mask.emplace_back(mask.items[j], mask.scores[j]);
            }
            const auto seq = explain::build_perturbation_sequence(mask, cfg.eval.steps);
            if (combo.level == Level::kItem) {
              inst.metrics["pos_p"] = metrics::pos_p_item(ctx, seq, *target.item, combo.k);
              inst.metrics["neg_p"] = metrics::neg_p_item(ctx, seq, *target.item, combo.k);
            } else {
              inst.metrics["pos_p"] = metrics::pos_p_list(ctx, seq, top.items, combo.k);
              inst.metrics["neg_p"] = metrics::neg_p_list(ctx, seq, top.items, combo.k);
            }
            inst.metrics["gini"] = metrics::gini(mask.scores);
            inst.success = true;
          } else {
            explain::ExplicitPerturbation p;
            inst.wall_time_s = metrics::wall_time([&] { p = explainer.explain_explicit(ctx, target); });
            inst.queries_used = p.queries_used;
            inst.removed = p.removed;
            inst.success = p.success;
            const auto state = ctx.state_without_edges(p.removed);
            if (combo.level == Level::kItem) {
              inst.metrics["pn_s"] = metrics::pn_s_item(ctx, state, *target.item, combo.k);
            } else {
              inst.metrics["pn_s"] = metrics::pn_s_list(ctx, state, top.items, combo.k);
              inst.metrics["pn_r"] = metrics::pn_r(ctx, state, top.items, combo.k);
            }
            if (p.success) {
              inst.metrics["num_perturb"] =
                  static_cast<double>(metrics::num_perturb(p, cfg.eval.perturb_mode));
            }
          }
          inst.metrics["wall_time_s"] = inst.wall_time_s;
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& err) {
          inst.error = err.what();
          inst.metrics.clear();
          inst.success = false;
        }
        out[c].push_back(std::move(inst));
      }
    }
  });

  EvalReport report;
  report.users = users_;
  report.lxr_training_users = lxr_users_;
  for (std::size_t c = 0; c < combos.size(); ++c) {
    const Combo& combo = combos[c];
    const auto& explainer = *explainers_[combo.explainer];
    if (!combo.supported) {
      ReportRow row;
      row.dataset = cfg.data.name;
      row.recommender = model_label;
      row.explainer = std::string(explainer.name());
      row.format = std::string(explain::format_name(combo.format));
      row.level = std::string(explain::level_name(combo.level));
      row.k = combo.k;
      row.scope = explainer.uses_scope() ? scope_label : "full";
      row.metric = "unsupported";
      row.mean = row.std = std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back(std::move(row));
      continue;
    }
    const std::size_t first = report.instances.size();
    for (auto& user_out : per_user) {
      for (auto& inst : user_out[c]) {
        if (!inst.error.empty()) {
          std::cerr << fmt::format("warning: {} failed for user {}: {}\n", inst.explainer,
                                   inst.user, inst.error);
        }
        report.instances.push_back(std::move(inst));
      }
    }
    const auto slice = std::span(report.instances).subspan(first);
    auto rows = aggregate(cfg, model_label, slice);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

EvalReport run_experiment(const ExperimentConfig& config) {
  auto exp = Experiment::from_config(config);
  return exp.evaluate(config.eval.scope);
}

EvalReport scope_ablation(const ExperimentConfig& config,
                          std::span<const scope::ScopeKind> scopes) {
  if (scopes.empty()) throw ConfigError("scope ablation needs at least one scope");
  auto exp = Experiment::from_config(config);
  EvalReport out;
  for (auto s : scopes) {
    auto r = exp.evaluate(s, true);
    out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
    out.instances.insert(out.instances.end(), std::make_move_iterator(r.instances.begin()),
                         std::make_move_iterator(r.instances.end()));
    out.users = r.users;
    out.lxr_training_users = r.lxr_training_users;
  }
  return out;
}

std::vector<ReportRow> aggregate(const ExperimentConfig& config, std::string_view recommender,
                                 std::span<const InstanceRecord> instances) {
  return group_rows(config, recommender, instances, false);
}

std::vector<ReportRow> positional_breakdown(const ExperimentConfig& config,
                                            std::string_view recommender,
                                            std::span<const InstanceRecord> instances) {
  return group_rows(config, recommender, instances, true);
}

GridResult grid_search(const Config& base, std::span<const GridAxis> axes,
                       std::string_view objective_metric,
                       const std::function<double(const Config&)>& evaluate) {
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("grid axis " + axis.key + " has no values");
    Config probe = base;
    probe.set(axis.key, axis.values.front());
  }
  const bool maximize = metrics::higher_is_better(objective_metric);
  GridResult result;
  std::vector<std::size_t> idx(axes.size(), 0);
  bool have_best = false;
  while (true) {
    Config c = base;
    GridPoint point;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      c.set(axes[a].key, axes[a].values[idx[a]]);
      point.assignment.emplace_back(axes[a].key, axes[a].values[idx[a]]);
    }
    point.objective = evaluate(c);
    const double v = point.objective;
    const bool better = !have_best ||
                        (std::isnan(result.points[result.best].objective) && !std::isnan(v)) ||
                        (maximize ? v > result.points[result.best].objective
                                  : v < result.points[result.best].objective);
    result.points.push_back(std::move(point));
    if (better) {
      result.best = result.points.size() - 1;
      result.best_config = c;
      have_best = true;
    }
    // Odometer with the last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) return result;
    }
    if (axes.empty()) return result;
  }
}

GridResult grid_search_experiment(const Config& base, std::span<const GridAxis> axes,
                                  std::string_view objective_metric) {
  const auto eval = [&](const Config& c) {
    Config v = c;
    const auto seed = static_cast<std::uint64_t>(v.count("eval.seed"));
    v.set("eval.seed", std::to_string(mix_seed(seed, 0x56414c) >> 2));
    auto x = to_experiment(v);
    x.output = {};
    const auto report = run_experiment(x);
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& row : report.rows) {
      if (row.metric != objective_metric || row.n == 0) continue;
      total += row.mean * static_cast<double>(row.n);
      n += row.n;
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : total / static_cast<double>(n);
  };
  return grid_search(base, axes, objective_metric, eval);
}

}  // namespace cfx::bench
