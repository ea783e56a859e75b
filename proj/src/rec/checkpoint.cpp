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

#include "cfx/rec/checkpoint.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cfx/rec/lightgcn.hpp"
#include "cfx/rec/mf.hpp"

namespace cfx::rec {

namespace {

void write_table(std::ostream& out, const char* name,
                 const std::vector<double>& values, std::size_t cols) {
  const std::size_t rows = cols ? values.size() / cols : 0;
  out << name << ' ' << rows << ' ' << cols << '\n';
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) line.push_back(' ');
      line += fmt::format("{:a}", values[r * cols + c]);
    }
    out << line << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw ParseError(line_no_ + 1, "unexpected end of checkpoint");
    ++line_no_;
    return s;
  }

  std::vector<double> table(const std::string& expected, std::size_t rows,
                            std::size_t cols) {
    std::istringstream head(line());
    std::string name;
    std::size_t r = 0, c = 0;
    if (!(head >> name >> r >> c) || name != expected || r != rows || c != cols) {
      throw ParseError(line_no_, "expected table " + expected + " " +
                                     std::to_string(rows) + "x" + std::to_string(cols));
    }
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::size_t k = 0; k < rows; ++k) {
      const std::string s = line();
      const char* p = s.c_str();
      for (std::size_t j = 0; j < cols; ++j) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) throw ParseError(line_no_, "bad float in table " + expected);
        values.push_back(v);
        p = end;
      }
    }
    return values;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const Recommender& model) {
  const auto& g = model.graph();
  std::size_t dim = 0, layers = 0;
  if (const auto* mf = dynamic_cast<const MFModel*>(&model)) {
    dim = mf->dim();
  } else if (const auto* gcn = dynamic_cast<const LightGCNModel*>(&model)) {
    dim = gcn->dim();
    layers = gcn->layers();
  } else {
    throw ConfigError("checkpointing supports MF and LightGCN models only");
  }
  out << "cfx-checkpoint 1\n";
  out << "kind " << model_kind_name(model.kind()) << " dim " << dim << " layers "
      << layers << " users " << g.num_users() << " items " << g.num_items()
      << " edges " << g.num_interactions() << '\n';
  out << "edges\n";
  for (const auto& [u, i] : g.interactions()) out << u << '\t' << i << '\n';
  if (const auto* mf = dynamic_cast<const MFModel*>(&model)) {
    write_table(out, "item_embeddings", mf->embeddings(), dim);
    write_table(out, "item_bias", mf->biases(), 1);
  } else {
    const auto* gcn = dynamic_cast<const LightGCNModel*>(&model);
    write_table(out, "initial_embeddings", gcn->initial_embeddings(), dim);
  }
}

void save_model(const std::filesystem::path& path, const Recommender& model) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write checkpoint: " + path.string());
  save_model(out, model);
}

std::unique_ptr<Recommender> load_model(std::istream& in) {
  Reader r(in);
  if (r.line() != "cfx-checkpoint 1") throw ParseError(1, "not a cfx checkpoint");
  std::istringstream head(r.line());
  std::string k_kind, kind, k_dim, k_layers, k_users, k_items, k_edges;
  std::size_t dim = 0, layers = 0, users = 0, items = 0, edges = 0;
  if (!(head >> k_kind >> kind >> k_dim >> dim >> k_layers >> layers >> k_users >>
        users >> k_items >> items >> k_edges >> edges) ||
      k_kind != "kind" || k_dim != "dim" || k_layers != "layers" ||
      k_users != "users" || k_items != "items" || k_edges != "edges") {
    throw ParseError(2, "malformed checkpoint header");
  }
  if (r.line() != "edges") throw ParseError(3, "expected edges section");
  std::vector<data::Interaction> pairs;
  pairs.reserve(edges);
  for (std::size_t e = 0; e < edges; ++e) {
    std::istringstream ls(r.line());
    UserId u = 0;
    ItemId i = 0;
    if (!(ls >> u >> i)) throw ParseError(r.line_no(), "bad edge line");
    pairs.emplace_back(u, i);
  }
  auto graph = std::make_shared<const data::InteractionMatrix>(users, items,
                                                               std::move(pairs));
  switch (parse_model_kind(kind)) {
    case ModelKind::kMF: {
      auto q = r.table("item_embeddings", items, dim);
      auto b = r.table("item_bias", items, 1);
      return std::make_unique<MFModel>(std::move(graph), dim, std::move(q),
                                       std::move(b));
    }
    case ModelKind::kLightGCN: {
      auto e0 = r.table("initial_embeddings", users + items, dim);
      return std::make_unique<LightGCNModel>(std::move(graph), dim, layers,
                                             std::move(e0));
    }
  }
  throw ParseError(2, "unknown model kind");
}

std::unique_ptr<Recommender> load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint: " + path.string());
  return load_model(in);
}

}  // namespace cfx::rec
