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

#include "cfx/bench/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

namespace cfx::bench {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::map<std::string, std::string>& Config::default_entries() {
  static const std::map<std::string, std::string> defaults = {
      {"data.name", "dataset"},
      {"data.path", ""},
      {"data.format", "tsv"},
      {"data.snapshot", ""},
      {"data.threshold", "3"},
      {"data.min_degree", "3"},
      {"data.split_seed", "42"},

      {"model.kind", "mf"},
      {"model.checkpoint", ""},
      {"model.dim", "32"},
      {"model.layers", "2"},
      {"model.lr", ""},
      {"model.l2", "0.0001"},
      {"model.epochs", "100"},
      {"model.patience", "20"},
      {"model.batch_size", "2048"},
      {"model.neg_samples", "1"},
      {"model.init_std", "0.1"},
      {"model.seed", "1"},
      {"model.recall_k", "20"},

      {"explain.methods", "shap,lime,lxr,accent,random"},

      {"lime.n_samples", "200"},
      {"lime.kernel_width", "0.75"},
      {"lime.keep_prob", "0.5"},
      {"lime.ridge", "0.001"},
      {"lime.seed", "7"},

      {"shap.n_permutations", "64"},
      {"shap.exact_limit", "12"},
      {"shap.seed", "11"},

      {"prince.alpha", "0.15"},
      {"prince.ppr_eps", "1e-10"},
      {"prince.max_iterations", "1000"},
      {"prince.max_removals", "0"},

      {"accent.max_removals", "0"},

      {"lxr.hidden_dim", "64"},
      {"lxr.lambda_pos", "1"},
      {"lxr.lambda_neg", "1"},
      {"lxr.alpha_l1", "0.05"},
      {"lxr.epochs", "10"},
      {"lxr.lr", "0.005"},
      {"lxr.batch_size", "32"},
      {"lxr.targets_per_user", "5"},
      {"lxr.seed", "5"},

      {"cf.steps", "100"},
      {"cf.lr", "0.1"},
      {"cf.beta", "0.5"},
      {"cf.margin", "0.01"},
      {"cf.init_logit", "2"},
      {"cf.seed", "3"},

      {"unr.n_iterations", "100"},
      {"unr.c_uct", "1"},
      {"unr.max_size", "5"},
      {"unr.seed", "13"},

      {"random.seed", "17"},

      {"eval.k", "3,5"},
      {"eval.steps", "10"},
      {"eval.levels", "item,list"},
      {"eval.formats", "implicit,explicit"},
      {"eval.n_users", "500"},
      {"eval.users", ""},
      {"eval.min_history", "1"},
      {"eval.seed", "2024"},
      {"eval.scope", "khop"},
      {"eval.hops", "0"},
      {"eval.lxr_train_users", "0"},
      {"eval.perturb_mode", "literal"},
      {"eval.threads", "0"},

      {"output.csv", ""},
      {"output.json", ""},
      {"output.positions_csv", ""},
      {"output.instances", ""},
  };
  return defaults;
}

Config::Config() : entries_(default_entries()) {}

Config Config::parse(std::istream& in) {
  Config c;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(lineno, "unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    try {
      c.set(full, value);
    } catch (const ConfigError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!default_entries().count(key)) throw ConfigError("unknown config key: " + key);
  entries_[key] = value;
}

const std::string& Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key: " + key);
  return it->second;
}

double Config::real(const std::string& key) const {
  const std::string& v = get(key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

std::int64_t Config::integer(const std::string& key) const {
  const std::string& v = get(key);
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

std::size_t Config::count(const std::string& key) const {
  const auto x = integer(key);
  if (x < 0) throw ConfigError(key + " must be >= 0");
  return static_cast<std::size_t>(x);
}

bool Config::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  const std::string& v = get(key);
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto stop = comma == std::string::npos ? v.size() : comma;
    auto item = trim(std::string_view(v).substr(start, stop - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void Config::write(std::ostream& out) const {
  std::string section;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << key.substr(dot + 1) << " = " << value << '\n';
  }
}

ExperimentConfig to_experiment(const Config& c) {
  ExperimentConfig x;
  x.data.name = c.str("data.name");
  x.data.path = c.str("data.path");
  x.data.format = data::parse_rating_format(c.str("data.format"));
  x.data.snapshot = c.str("data.snapshot");
  x.data.threshold = c.real("data.threshold");
  x.data.min_degree = c.count("data.min_degree");
  x.data.split_seed = c.count("data.split_seed");

  auto& m = x.model;
  m.kind = rec::parse_model_kind(c.str("model.kind"));
  m.checkpoint = c.str("model.checkpoint");
  m.mf.dim = m.lightgcn.dim = c.count("model.dim");
  m.lightgcn.layers = c.count("model.layers");
  if (!c.str("model.lr").empty()) m.mf.lr = m.lightgcn.lr = c.real("model.lr");
  m.mf.l2 = m.lightgcn.l2 = c.real("model.l2");
  m.mf.epochs = m.lightgcn.epochs = static_cast<int>(c.integer("model.epochs"));
  m.mf.patience = m.lightgcn.patience = static_cast<int>(c.integer("model.patience"));
  m.lightgcn.batch_size = c.count("model.batch_size");
  m.mf.neg_samples = c.count("model.neg_samples");
  m.mf.init_std = m.lightgcn.init_std = c.real("model.init_std");
  m.mf.seed = m.lightgcn.seed = c.count("model.seed");
  m.mf.recall_k = m.lightgcn.recall_k = c.count("model.recall_k");

  x.explainers = c.list("explain.methods");
  const auto known = explain::explainer_names();
  for (const auto& name : x.explainers) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("unknown explainer: " + name);
    }
  }

  auto& e = x.explainer;
  e.lime.n_samples = c.count("lime.n_samples");
  e.lime.kernel_width = c.real("lime.kernel_width");
  e.lime.keep_prob = c.real("lime.keep_prob");
  e.lime.ridge = c.real("lime.ridge");
  e.lime.seed = c.count("lime.seed");
  e.shap.n_permutations = c.count("shap.n_permutations");
  e.shap.exact_limit = c.count("shap.exact_limit");
  e.shap.seed = c.count("shap.seed");
  e.prince.alpha = c.real("prince.alpha");
  e.prince.ppr_eps = c.real("prince.ppr_eps");
  e.prince.max_iterations = c.count("prince.max_iterations");
  e.prince.max_removals = c.count("prince.max_removals");
  e.accent.max_removals = c.count("accent.max_removals");
  e.lxr.hidden_dim = c.count("lxr.hidden_dim");
  e.lxr.lambda_pos = c.real("lxr.lambda_pos");
  e.lxr.lambda_neg = c.real("lxr.lambda_neg");
  e.lxr.alpha_l1 = c.real("lxr.alpha_l1");
  e.lxr.epochs = static_cast<int>(c.integer("lxr.epochs"));
  e.lxr.lr = c.real("lxr.lr");
  e.lxr.batch_size = c.count("lxr.batch_size");
  e.lxr.targets_per_user = c.count("lxr.targets_per_user");
  e.lxr.seed = c.count("lxr.seed");
  e.cf.steps = c.count("cf.steps");
  e.cf.lr = c.real("cf.lr");
  e.cf.beta = c.real("cf.beta");
  e.cf.margin = c.real("cf.margin");
  e.cf.init_logit = c.real("cf.init_logit");
  e.cf.seed = c.count("cf.seed");
  e.unr.n_iterations = c.count("unr.n_iterations");
  e.unr.c_uct = c.real("unr.c_uct");
  e.unr.max_size = c.count("unr.max_size");
  e.unr.seed = c.count("unr.seed");
  e.random_seed = c.count("random.seed");

  auto& v = x.eval;
  v.ks.clear();
  for (const auto& s : c.list("eval.k")) {
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc() || ptr != s.data() + s.size() || k == 0) throw ConfigError("eval.k values must be >= 1");
    v.ks.push_back(k);
  }
  if (v.ks.empty()) throw ConfigError("eval.k is empty");
  v.steps = c.count("eval.steps");
  if (v.steps == 0) throw ConfigError("eval.steps must be >= 1");
  v.levels.clear();
  for (const auto& s : c.list("eval.levels")) v.levels.push_back(explain::parse_level(s));
  v.formats.clear();
  for (const auto& s : c.list("eval.formats")) v.formats.push_back(explain::parse_format(s));
  v.n_users = c.count("eval.n_users");
  for (const auto& s : c.list("eval.users")) {
    std::uint32_t u = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), u);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("eval.users: bad user id '" + s + "'");
    }
    v.users.push_back(u);
  }
  v.min_history = c.count("eval.min_history");
  if (v.min_history == 0) throw ConfigError("eval.min_history must be >= 1");
  v.seed = c.count("eval.seed");
  v.scope = scope::parse_scope_kind(c.str("eval.scope"));
  v.hops = c.count("eval.hops");
  v.lxr_train_users = c.count("eval.lxr_train_users");
  const auto mode = c.str("eval.perturb_mode");
  if (mode == "literal") {
    v.perturb_mode = metrics::PerturbMode::kLiteral;
  } else if (mode == "symmetric") {
    v.perturb_mode = metrics::PerturbMode::kSymmetric;
  } else {
    throw ConfigError("eval.perturb_mode must be literal or symmetric");
  }
  v.threads = c.count("eval.threads");

  x.output.csv = c.str("output.csv");
  x.output.json = c.str("output.json");
  x.output.positions_csv = c.str("output.positions_csv");
  x.output.instances = c.str("output.instances");
  return x;
}

std::size_t resolve_threads(std::size_t requested) {
  std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                 : requested;
  if (const char* env = std::getenv("CFX_THREADS"); env != nullptr && *env != '\0') {
    std::size_t cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size() || cap == 0) {
      throw ConfigError("CFX_THREADS must be a positive integer");
    }
    n = std::min(n, cap);
  }
  return n;
}

}  // namespace cfx::bench
