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

#include "cfx/rec/lightgcn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfx/diff/adam.hpp"
#include "cfx/simd/kernels.hpp"

namespace cfx::rec {

std::vector<double> frozen_normalization(const data::InteractionMatrix& graph) {
  std::vector<double> norm(graph.num_interactions());
  for (EdgeId e = 0; e < graph.num_interactions(); ++e) {
    const double du = static_cast<double>(graph.row(graph.edge_user(e)).size());
    const double di = static_cast<double>(graph.col(graph.edge_item(e)).size());
    norm[e] = 1.0 / std::sqrt(du * di);
  }
  return norm;
}

void propagate_layer(const data::InteractionMatrix& graph,
                     std::span<const double> norm,
                     std::span<const double> edge_weights,
                     const NodeEmbeddings& in, NodeEmbeddings& out) {
  out.num_users = in.num_users;
  out.num_items = in.num_items;
  out.dim = in.dim;
  out.values.assign(in.values.size(), 0.0);
  const auto& k = simd::kernels();
  const std::size_t d = in.dim;
  const std::size_t nu = in.num_users;
  const bool weighted = !edge_weights.empty();
  for (EdgeId e = 0; e < graph.num_interactions(); ++e) {
    const double c = weighted ? norm[e] * edge_weights[e] : norm[e];
    if (c == 0.0) continue;
    const std::size_t u = graph.edge_user(e);
    const std::size_t i = nu + graph.edge_item(e);
    k.axpy(c, in.values.data() + i * d, out.values.data() + u * d, d);
    k.axpy(c, in.values.data() + u * d, out.values.data() + i * d, d);
  }
}

LightGCNModel::LightGCNModel(std::shared_ptr<const data::InteractionMatrix> graph,
                             std::size_t dim, std::size_t layers,
                             std::vector<double> initial_embeddings)
    : graph_(std::move(graph)), dim_(dim), layers_(layers) {
  if (!graph_) throw ConfigError("LightGCN model needs a training graph");
  if (dim_ == 0) throw ConfigError("LightGCN dimension must be >= 1");
  if (layers_ == 0) throw ConfigError("LightGCN needs at least one layer");
  initial_.num_users = graph_->num_users();
  initial_.num_items = graph_->num_items();
  initial_.dim = dim_;
  if (initial_embeddings.size() !=
      (initial_.num_users + initial_.num_items) * dim_) {
    throw ConfigError("LightGCN embedding table has the wrong shape");
  }
  for (double x : initial_embeddings) {
    if (!std::isfinite(x)) throw NumericError("non-finite LightGCN embedding");
  }
  initial_.values = std::move(initial_embeddings);
  norm_ = frozen_normalization(*graph_);
  base_final_ = propagate({}).final;
}

Propagation LightGCNModel::propagate(std::span<const double> edge_weights) const {
  if (!edge_weights.empty() && edge_weights.size() != graph_->num_interactions()) {
    throw DomainError("edge mask length " + std::to_string(edge_weights.size()) +
                      " != edge count " +
                      std::to_string(graph_->num_interactions()));
  }
  Propagation p;
  p.layers.reserve(layers_ + 1);
  p.layers.push_back(initial_);
  p.final = initial_;
  const auto& k = simd::kernels();
  for (std::size_t l = 0; l < layers_; ++l) {
    NodeEmbeddings next;
    propagate_layer(*graph_, norm_, edge_weights, p.layers.back(), next);
    k.axpy(1.0, next.values.data(), p.final.values.data(), next.values.size());
    p.layers.push_back(std::move(next));
  }
  const double inv = 1.0 / static_cast<double>(layers_ + 1);
  k.scale(inv, p.final.values.data(), p.final.values.data(), p.final.values.size());
  return p;
}

std::vector<double> LightGCNModel::edge_mask(const UserState& state) const {
  const auto row = graph_->row(state.user);
  for (ItemId i : state.history) {
    if (!std::binary_search(row.begin(), row.end(), i)) {
      throw DomainError("LightGCN state adds item " + std::to_string(i) +
                        " outside the training graph");
    }
  }
  std::vector<double> mask;
  const auto ensure = [&] {
    if (mask.empty()) mask.assign(graph_->num_interactions(), 1.0);
  };
  if (state.history.size() != row.size()) {
    ensure();
    const EdgeId base = graph_->row_offset(state.user);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!std::binary_search(state.history.begin(), state.history.end(), row[k])) {
        mask[base + k] = 0.0;
      }
    }
  }
  for (EdgeId e : state.removed_edges) {
    if (e >= graph_->num_interactions()) {
      throw DomainError("removed edge id out of range: " + std::to_string(e));
    }
    ensure();
    mask[e] = 0.0;
  }
  return mask;
}

std::vector<double> LightGCNModel::score_all(const UserState& state) const {
  const auto mask = edge_mask(state);
  std::vector<double> out(graph_->num_items());
  const auto& k = simd::kernels();
  const auto score_with = [&](const NodeEmbeddings& f) {
    const auto fu = f.user(state.user);
    for (ItemId i = 0; i < out.size(); ++i) {
      out[i] = k.dot(fu.data(), f.item(i).data(), dim_);
    }
  };
  if (mask.empty()) {
    score_with(base_final_);
  } else {
    score_with(propagate(mask).final);
  }
  return out;
}

std::vector<double> LightGCNModel::score_items(
    const UserState& state, std::span<const ItemId> items) const {
  const auto mask = edge_mask(state);
  const auto& k = simd::kernels();
  const auto collect = [&](const NodeEmbeddings& f) {
    std::vector<double> out;
    out.reserve(items.size());
    const auto fu = f.user(state.user);
    for (ItemId i : items) out.push_back(k.dot(fu.data(), f.item(i).data(), dim_));
    return out;
  };
  if (mask.empty()) return collect(base_final_);
  return collect(propagate(mask).final);
}

NodeEmbeddings propagate_lightgcn(const LightGCNModel& model,
                                  std::span<const double> edge_mask) {
  return model.propagate(edge_mask).final;
}

namespace {

double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double softplus(double x) { return x > 30 ? x : std::log1p(std::exp(x)); }

}  // namespace

LightGCNModel train_lightgcn(const data::DatasetSplit& split,
                             const LightGCNConfig& config, TrainingLog* log) {
  if (config.layers == 0) throw ConfigError("LightGCN needs at least one layer (L >= 1)");
  if (config.dim == 0) throw ConfigError("LightGCN dimension must be >= 1");
  if (config.epochs < 1) throw ConfigError("LightGCN epochs must be >= 1");
  if (config.batch_size == 0) throw ConfigError("batch size must be >= 1");
  auto graph = std::make_shared<const data::InteractionMatrix>(split.train);
  const std::size_t nu = graph->num_users();
  const std::size_t ni = graph->num_items();
  const std::size_t d = config.dim;
  const std::size_t n_edges = graph->num_interactions();
  if (n_edges == 0) throw EmptyDatasetError("no training interactions");

  Rng rng(config.seed);
  std::vector<double> e0((nu + ni) * d);
  for (auto& x : e0) x = config.init_std * rng.normal();
  const auto norm = frozen_normalization(*graph);
  const auto& k = simd::kernels();

  diff::Adam adam(e0.size(), config.lr);
  const bool validate = !split.val.empty();
  EarlyStopper stopper(config.patience);
  std::vector<double> best = e0;
  TrainingLog local_log;

  std::vector<EdgeId> edges(n_edges);
  std::iota(edges.begin(), edges.end(), 0);
  const double inv_layers = 1.0 / static_cast<double>(config.layers + 1);

  NodeEmbeddings layer, next, final_emb, grad_final, acc, acc_next;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(edges);
    double loss = 0.0;
    std::size_t samples = 0;
    for (std::size_t start = 0; start < n_edges; start += config.batch_size) {
      const std::size_t end = std::min(n_edges, start + config.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);

      // Forward.
      layer = NodeEmbeddings{nu, ni, d, e0};
      final_emb = layer;
      for (std::size_t l = 0; l < config.layers; ++l) {
        propagate_layer(*graph, norm, {}, layer, next);
        k.axpy(1.0, next.values.data(), final_emb.values.data(), next.values.size());
        std::swap(layer, next);
      }
      k.scale(inv_layers, final_emb.values.data(), final_emb.values.data(),
              final_emb.values.size());

      grad_final = NodeEmbeddings{nu, ni, d, std::vector<double>((nu + ni) * d, 0.0)};
      std::vector<double> reg((nu + ni) * d, 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const EdgeId e = edges[b];
        const UserId u = graph->edge_user(e);
        const ItemId i = graph->edge_item(e);
        const auto row = graph->row(u);
        if (row.size() == ni) continue;
        ItemId j = 0;
        do {
          j = static_cast<ItemId>(rng.index(ni));
        } while (std::binary_search(row.begin(), row.end(), j));
        const auto fu = final_emb.user(u);
        const auto fi = final_emb.item(i);
        const auto fj = final_emb.item(j);
        const double x = k.dot(fu.data(), fi.data(), d) - k.dot(fu.data(), fj.data(), d);
        loss += softplus(-x);
        ++samples;
        const double g = sigmoid(-x) * inv_b;
        double* gu = grad_final.values.data() + u * d;
        double* gi = grad_final.values.data() + (nu + i) * d;
        double* gj = grad_final.values.data() + (nu + j) * d;
        for (std::size_t c = 0; c < d; ++c) {
          gu[c] -= g * (fi[c] - fj[c]);
          gi[c] -= g * fu[c];
          gj[c] += g * fu[c];
        }
        for (std::size_t node : {static_cast<std::size_t>(u), nu + i, nu + j}) {
          k.axpy(config.l2 * inv_b, e0.data() + node * d, reg.data() + node * d, d);
        }
      }

      // Backward: dE0 = (1/(L+1)) sum_l A^l dF, with A symmetric.
      acc = grad_final;
      std::vector<double> grad = grad_final.values;
      for (std::size_t l = 0; l < config.layers; ++l) {
        propagate_layer(*graph, norm, {}, acc, acc_next);
        k.axpy(1.0, acc_next.values.data(), grad.data(), grad.size());
        std::swap(acc, acc_next);
      }
      k.scale(inv_layers, grad.data(), grad.data(), grad.size());
      k.axpy(1.0, reg.data(), grad.data(), grad.size());
      adam.step(e0, grad);
    }
    const double mean_loss = samples ? loss / static_cast<double>(samples) : 0.0;
    if (!std::isfinite(mean_loss)) throw TrainingError(epoch, "LightGCN loss diverged");
    for (double x : e0) {
      if (!std::isfinite(x)) throw TrainingError(epoch, "non-finite LightGCN embedding");
    }
    EpochLog entry{epoch, mean_loss, 0.0};
    if (validate) {
      const LightGCNModel current(graph, d, config.layers, e0);
      entry.val_recall = recall_at_k(current, split.val, config.recall_k);
      if (stopper.update(epoch, entry.val_recall)) best = e0;
    }
    local_log.epochs.push_back(entry);
    local_log.stopped_epoch = epoch;
    if (validate && stopper.should_stop()) break;
  }
  if (validate) {
    local_log.best_epoch = stopper.best_epoch();
  } else {
    best = std::move(e0);
    local_log.best_epoch = local_log.stopped_epoch;
  }
  if (log) *log = std::move(local_log);
  return LightGCNModel(std::move(graph), d, config.layers, std::move(best));
}

}  // namespace cfx::rec
