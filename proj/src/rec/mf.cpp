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

#include "cfx/rec/mf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfx/simd/kernels.hpp"

namespace cfx::rec {

MFModel::MFModel(std::shared_ptr<const data::InteractionMatrix> graph,
                 std::size_t dim, std::vector<double> item_embeddings,
                 std::vector<double> item_bias)
    : graph_(std::move(graph)),
      dim_(dim),
      embeddings_(std::move(item_embeddings)),
      bias_(std::move(item_bias)) {
  if (!graph_) throw ConfigError("MF model needs a training graph");
  if (dim_ == 0) throw ConfigError("MF dimension must be >= 1");
  if (embeddings_.size() != graph_->num_items() * dim_ ||
      bias_.size() != graph_->num_items()) {
    throw ConfigError("MF parameter shapes do not match the item count");
  }
  for (double x : embeddings_) {
    if (!std::isfinite(x)) throw NumericError("non-finite MF embedding");
  }
  for (double x : bias_) {
    if (!std::isfinite(x)) throw NumericError("non-finite MF bias");
  }
}

std::vector<ItemId> MFModel::effective_history(const UserState& state) const {
  if (state.removed_edges.empty()) return state.history;
  std::vector<ItemId> dropped;
  for (EdgeId e : state.removed_edges) {
    if (e < graph_->num_interactions() && graph_->edge_user(e) == state.user) {
      dropped.push_back(graph_->edge_item(e));
    }
  }
  std::sort(dropped.begin(), dropped.end());
  return remove_items(state.history, dropped);
}

std::vector<double> MFModel::user_representation(
    std::span<const ItemId> history) const {
  std::vector<double> p(dim_, 0.0);
  if (history.empty()) return p;
  const auto& k = simd::kernels();
  for (ItemId j : history) k.axpy(1.0, item_embedding(j).data(), p.data(), dim_);
  const double inv = 1.0 / static_cast<double>(history.size());
  k.scale(inv, p.data(), p.data(), dim_);
  return p;
}

double MFModel::score(std::span<const ItemId> history, ItemId item) const {
  if (history.empty()) return bias_[item];
  const auto p = user_representation(history);
  return simd::kernels().dot(p.data(), item_embedding(item).data(), dim_) +
         bias_[item];
}

std::vector<double> MFModel::score_all(const UserState& state) const {
  const auto history = effective_history(state);
  std::vector<double> out(graph_->num_items());
  if (history.empty()) {
    out = bias_;
    return out;
  }
  const auto p = user_representation(history);
  simd::kernels().gemv(embeddings_.data(), p.data(), bias_.data(), out.data(),
                       graph_->num_items(), dim_);
  return out;
}

std::vector<double> MFModel::score_items(const UserState& state,
                                         std::span<const ItemId> items) const {
  const auto history = effective_history(state);
  std::vector<double> out;
  out.reserve(items.size());
  if (history.empty()) {
    for (ItemId i : items) out.push_back(bias_[i]);
    return out;
  }
  const auto p = user_representation(history);
  const auto& k = simd::kernels();
  for (ItemId i : items) {
    out.push_back(k.dot(p.data(), item_embedding(i).data(), dim_) + bias_[i]);
  }
  return out;
}

double score_mf(const MFModel& model, std::span<const ItemId> history,
                ItemId item) {
  return model.score(history, item);
}

namespace {

double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double softplus(double x) {
  return x > 30 ? x : std::log1p(std::exp(x));
}

}  // namespace

MFModel train_mf(const data::DatasetSplit& split, const MFConfig& config,
                 TrainingLog* log) {
  if (config.dim == 0) throw ConfigError("MF dimension must be >= 1");
  if (config.epochs < 1) throw ConfigError("MF epochs must be >= 1");
  auto graph = std::make_shared<const data::InteractionMatrix>(split.train);
  const std::size_t n_items = graph->num_items();
  const std::size_t d = config.dim;
  if (n_items == 0) throw EmptyDatasetError("no items to train on");

  Rng rng(config.seed);
  std::vector<double> q(n_items * d), b(n_items, 0.0);
  for (auto& x : q) x = config.init_std * rng.normal();

  const auto& k = simd::kernels();
  const bool validate = !split.val.empty();
  EarlyStopper stopper(config.patience);
  std::vector<double> best_q = q, best_b = b;
  TrainingLog local_log;

  std::vector<UserId> users(graph->num_users());
  std::iota(users.begin(), users.end(), 0);
  std::vector<double> sum(d), p(d), diff(d), g_total(d), g_own;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(users);
    double loss = 0.0;
    std::size_t samples = 0;
    for (UserId u : users) {
      const auto row = graph->row(u);
      const std::size_t n = row.size();
      if (n == 0 || n == n_items) continue;
      std::fill(sum.begin(), sum.end(), 0.0);
      for (ItemId j : row) k.axpy(1.0, q.data() + j * d, sum.data(), d);
      std::fill(g_total.begin(), g_total.end(), 0.0);
      g_own.assign(n * d, 0.0);

      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      for (std::size_t pos : order) {
        const ItemId i = row[pos];
        double* qi = q.data() + i * d;
        // Leave-one-out fold-in: the positive never sees itself.
        if (n > 1) {
          for (std::size_t c = 0; c < d; ++c) {
            p[c] = (sum[c] - qi[c]) / static_cast<double>(n - 1);
          }
        } else {
          std::fill(p.begin(), p.end(), 0.0);
        }
        for (std::size_t s = 0; s < config.neg_samples; ++s) {
          ItemId j = 0;
          do {
            j = static_cast<ItemId>(rng.index(n_items));
          } while (std::binary_search(row.begin(), row.end(), j));
          double* qj = q.data() + j * d;
          for (std::size_t c = 0; c < d; ++c) diff[c] = qi[c] - qj[c];
          const double x = k.dot(p.data(), diff.data(), d) + b[i] - b[j];
          loss += softplus(-x);
          ++samples;
          const double g = sigmoid(-x);
          for (std::size_t c = 0; c < d; ++c) {
            qi[c] += config.lr * (g * p[c] - config.l2 * qi[c]);
            qj[c] += config.lr * (-g * p[c] - config.l2 * qj[c]);
          }
          b[i] += config.lr * (g - config.l2 * b[i]);
          b[j] += config.lr * (-g - config.l2 * b[j]);
          if (n > 1) {
            const double scale = g / static_cast<double>(n - 1);
            k.axpy(scale, diff.data(), g_total.data(), d);
            k.axpy(scale, diff.data(), g_own.data() + pos * d, d);
          }
        }
      }
      // Each history item received the gradient of every sample whose
      // positive was some other item.
      if (n > 1) {
        for (std::size_t pos = 0; pos < n; ++pos) {
          double* qk = q.data() + row[pos] * d;
          const double* own = g_own.data() + pos * d;
          for (std::size_t c = 0; c < d; ++c) {
            qk[c] += config.lr * (g_total[c] - own[c]);
          }
        }
      }
    }
    const double mean_loss = samples ? loss / static_cast<double>(samples) : 0.0;
    if (!std::isfinite(mean_loss)) {
      throw TrainingError(epoch, "MF loss diverged");
    }
    EpochLog entry{epoch, mean_loss, 0.0};
    if (validate) {
      const MFModel current(graph, d, q, b);
      entry.val_recall = recall_at_k(current, split.val, config.recall_k);
      if (stopper.update(epoch, entry.val_recall)) {
        best_q = q;
        best_b = b;
      }
    }
    local_log.epochs.push_back(entry);
    local_log.stopped_epoch = epoch;
    if (validate && stopper.should_stop()) break;
  }
  if (validate) {
    local_log.best_epoch = stopper.best_epoch();
  } else {
    best_q = std::move(q);
    best_b = std::move(b);
    local_log.best_epoch = local_log.stopped_epoch;
  }
  if (log) *log = std::move(local_log);
  return MFModel(std::move(graph), d, std::move(best_q), std::move(best_b));
}

}  // namespace cfx::rec
