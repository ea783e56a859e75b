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

// cfx command-line driver.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "cfx/bench/config.hpp"
#include "cfx/bench/harness.hpp"
#include "cfx/bench/report.hpp"
#include "cfx/data/interactions.hpp"
#include "cfx/rec/checkpoint.hpp"
#include "cfx/simd/kernels.hpp"

namespace {

using cfx::bench::Config;

struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
};

// Every config key becomes --section.key on the top-level app.
void add_config_options(CLI::App& app, Overrides& o) {
  app.add_option("-c,--config", o.config_path, "Config file (sectioned key = value)");
  for (const auto& [key, def] : Config::default_entries()) {
    app.add_option_function<std::string>(
        "--" + key, [&o, key = key](const std::string& v) { o.values[key] = v; },
        def.empty() ? std::string("(unset)") : "default: " + def);
  }
}

Config resolve_config(const Overrides& o) {
  Config c = o.config_path.empty() ? Config{} : Config::load(o.config_path);
  for (const auto& [k, v] : o.values) c.set(k, v);
  return c;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path);
  if (!out) throw cfx::ConfigError("cannot write " + path);
  fn(out);
}

void write_outputs(const cfx::bench::ExperimentConfig& x, const cfx::bench::EvalReport& r,
                   std::string_view recommender) {
  using namespace cfx::bench;
  if (!x.output.csv.empty()) write_file(x.output.csv, [&](auto& out) { write_csv(out, r.rows); });
  if (!x.output.json.empty()) write_file(x.output.json, [&](auto& out) { write_json(out, r.rows); });
  if (!x.output.positions_csv.empty()) {
    const auto pos = positional_breakdown(x, recommender, r.instances);
    write_file(x.output.positions_csv, [&](auto& out) {
      write_csv(out, pos, CsvOptions{.with_position = true});
    });
  }
  if (!x.output.instances.empty()) {
    write_file(x.output.instances, [&](auto& out) { write_instances(out, r.instances); });
  }
}

int run_synth(const std::string& out_path, const std::string& format,
              cfx::data::SyntheticConfig sc) {
  const auto ratings = cfx::data::synthesize_ratings(sc);
  const auto fmt_kind = cfx::data::parse_rating_format(format);
  write_file(out_path, [&](auto& out) { cfx::data::write_ratings(out, ratings, fmt_kind); });
  fmt::print("wrote {} ratings to {}\n", ratings.size(), out_path);
  return 0;
}

int run_preprocess(const Config& c, const std::string& out_path) {
  const auto x = cfx::bench::to_experiment(c);
  if (x.data.path.empty()) throw cfx::ConfigError("--data.path is required");
  const auto raw = cfx::data::load_interactions(x.data.path, x.data.format);
  const auto pre = cfx::data::preprocess_implicit(raw, x.data.threshold, x.data.min_degree);
  const auto deg = cfx::data::degree_vectors(pre.matrix);
  const auto min_u = *std::min_element(deg.users.begin(), deg.users.end());
  const auto min_i = *std::min_element(deg.items.begin(), deg.items.end());
  fmt::print("users={} items={} interactions={}\n", pre.matrix.num_users(),
             pre.matrix.num_items(), pre.matrix.num_interactions());
  fmt::print("raw_ratings={} min_user_degree={} min_item_degree={}\n", raw.size(), min_u, min_i);
  if (!out_path.empty()) cfx::data::write_snapshot(out_path, pre.matrix);
  return 0;
}

int run_train(const Config& c, const std::string& out_path) {
  const auto x = cfx::bench::to_experiment(c);
  const auto data = cfx::bench::load_dataset(x.data);
  auto settings = x.model;
  settings.checkpoint.clear();
  cfx::rec::TrainingLog log;
  const auto model = cfx::bench::build_recommender(settings, data.split, &log);
  for (const auto& e : log.epochs) {
    fmt::print("epoch {:>4} loss {:.6f} val_recall {:.6f}\n", e.epoch, e.loss, e.val_recall);
  }
  fmt::print("best_epoch={} stopped_epoch={} test_recall@20={:.6f}\n", log.best_epoch,
             log.stopped_epoch, cfx::rec::recall_at_k(*model, data.split.test, 20));
  if (!out_path.empty()) cfx::rec::save_model(out_path, *model);
  return 0;
}

int run_evaluate(const Config& c, bool quiet) {
  const auto x = cfx::bench::to_experiment(c);
  const auto report = cfx::bench::run_experiment(x);
  write_outputs(x, report, cfx::rec::model_kind_name(x.model.kind));
  if (!quiet) std::cout << cfx::bench::format_table(report.rows);
  return 0;
}

int run_explain(Config c, const std::string& out_path) {
  if (c.get("eval.users").empty()) throw cfx::ConfigError("--eval.users is required");
  const auto x = cfx::bench::to_experiment(c);
  const auto report = cfx::bench::run_experiment(x);
  if (out_path.empty() || out_path == "-") {
    cfx::bench::write_instances(std::cout, report.instances);
  } else {
    write_file(out_path, [&](auto& out) { cfx::bench::write_instances(out, report.instances); });
  }
  return 0;
}

int run_report(const std::string& in_path, const std::string& to, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw cfx::ConfigError("cannot open " + in_path);
  const bool is_json = in_path.size() >= 5 && in_path.substr(in_path.size() - 5) == ".json";
  const auto rows = is_json ? cfx::bench::read_json(in) : cfx::bench::read_csv(in);
  if (to.empty()) {
    std::cout << cfx::bench::format_table(rows);
    return 0;
  }
  const auto kind = cfx::bench::parse_report_format(to);
  if (out_path.empty()) {
    if (kind == cfx::bench::ReportFormat::kCsv) {
      cfx::bench::write_csv(std::cout, rows);
    } else {
      cfx::bench::write_json(std::cout, rows);
    }
  } else {
    cfx::bench::emit_report(rows, out_path, kind);
  }
  return 0;
}

int run_ablate(const Config& c, const std::vector<std::string>& scope_names, bool quiet) {
  const auto x = cfx::bench::to_experiment(c);
  std::vector<cfx::scope::ScopeKind> scopes;
  for (const auto& s : scope_names) scopes.push_back(cfx::scope::parse_scope_kind(s));
  const auto report = cfx::bench::scope_ablation(x, scopes);
  write_outputs(x, report, cfx::rec::model_kind_name(x.model.kind));
  if (!quiet) std::cout << cfx::bench::format_table(report.rows);
  return 0;
}

int run_grid(const Config& c, const std::vector<std::string>& axes_spec,
             const std::string& objective, const std::string& out_path) {
  std::vector<cfx::bench::GridAxis> axes;
  for (const auto& spec : axes_spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw cfx::ConfigError("--axis expects key=v1,v2,...");
    cfx::bench::GridAxis axis;
    axis.key = spec.substr(0, eq);
    Config probe;
    probe.set(axis.key, spec.substr(eq + 1));
    axis.values = probe.list(axis.key);
    axes.push_back(std::move(axis));
  }
  const auto result = cfx::bench::grid_search_experiment(c, axes, objective);
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    std::string label;
    for (const auto& [k, v] : result.points[p].assignment) label += fmt::format("{}={} ", k, v);
    fmt::print("{}{}{:.6f}\n", p == result.best ? "* " : "  ", label, result.points[p].objective);
  }
  if (!out_path.empty()) write_file(out_path, [&](auto& out) { result.best_config.write(out); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfx: counterfactual explanation benchmark for recommenders"};
  app.require_subcommand(1);
  Overrides overrides;
  add_config_options(app, overrides);
  app.fallthrough();
  std::string simd;
  app.add_option("--simd", simd, "Force a kernel backend (scalar, avx2, neon)");

  std::string out_path;
  bool quiet = false;

  auto* synth = app.add_subcommand("synth", "Write a synthetic rating file");
  cfx::data::SyntheticConfig sc;
  std::string synth_format = "tsv";
  synth->add_option("--out", out_path, "Output rating file")->required();
  synth->add_option("--format", synth_format, "tsv, double-colon or csv");
  synth->add_option("--users", sc.num_users);
  synth->add_option("--items", sc.num_items);
  synth->add_option("--latent-dim", sc.latent_dim);
  synth->add_option("--mean-items", sc.mean_items_per_user);
  synth->add_option("--popularity-skew", sc.popularity_skew);
  synth->add_option("--temperature", sc.temperature);
  synth->add_option("--seed", sc.seed);

  auto* preprocess = app.add_subcommand("preprocess", "Filter a rating file into a snapshot");
  preprocess->add_option("--out", out_path, "Snapshot path");

  auto* train = app.add_subcommand("train", "Train a recommender and save a checkpoint");
  train->add_option("--out", out_path, "Checkpoint path");

  auto* explain = app.add_subcommand("explain", "Explain recommendations for --eval.users");
  explain->add_option("--out", out_path, "JSON-lines output (default stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Run the benchmark and write the report");
  evaluate->add_flag("-q,--quiet", quiet, "Do not print the table");

  auto* report = app.add_subcommand("report", "Print or convert a report");
  std::string report_in, report_to;
  report->add_option("--in", report_in, "CSV or JSON report")->required();
  report->add_option("--to", report_to, "csv or json");
  report->add_option("--out", out_path, "Output path (default stdout)");

  auto* ablate = app.add_subcommand("ablate-scope", "Compare graph explainers across scopes");
  std::vector<std::string> scopes{"full", "khop", "indirect", "useronly"};
  ablate->add_option("--scopes", scopes, "Scopes to compare")->delimiter(',');
  ablate->add_flag("-q,--quiet", quiet, "Do not print the table");

  auto* grid = app.add_subcommand("grid", "Exhaustive hyperparameter grid search");
  std::vector<std::string> axes;
  std::string objective = "pos_p";
  grid->add_option("--axis", axes, "key=v1,v2,... (repeatable)")->required();
  grid->add_option("--objective", objective, "Metric id to optimise");
  grid->add_option("--out", out_path, "Write the best config here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!simd.empty()) {
      const auto backends = cfx::simd::available_backends();
      bool found = false;
      for (auto b : backends) {
        if (cfx::simd::backend_name(b) == simd) {
          cfx::simd::set_backend(b);
          found = true;
        }
      }
      if (!found) throw cfx::ConfigError("SIMD backend not available: " + simd);
    }
    if (synth->parsed()) return run_synth(out_path, synth_format, sc);
    if (report->parsed()) return run_report(report_in, report_to, out_path);
    const Config config = resolve_config(overrides);
    if (preprocess->parsed()) return run_preprocess(config, out_path);
    if (train->parsed()) return run_train(config, out_path);
    if (explain->parsed()) return run_explain(config, out_path);
    if (evaluate->parsed()) return run_evaluate(config, quiet);
    if (ablate->parsed()) return run_ablate(config, scopes, quiet);
    if (grid->parsed()) return run_grid(config, axes, objective, out_path);
  } catch (const cfx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cfx::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
