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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfx/common.hpp"

namespace cfx::data {

enum class RatingFormat { kTsv, kDoubleColon, kCsv };

// Accepts "tsv", "double-colon" (alias "dat", "::") and "csv".
RatingFormat parse_rating_format(std::string_view name);
std::string_view rating_format_name(RatingFormat f);

struct RawRating {
  std::string user_key;
  std::string item_key;
  std::optional<double> rating;
  std::optional<std::int64_t> timestamp;
};

using Interaction = std::pair<UserId, ItemId>;

// Sparse binary user x item matrix, doubling as the bipartite edge store.
// Edge ids follow the row-major (user, item) order, so edge e of user u lives
// at row_offset(u) + position of the item in rows(u).
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  // Duplicates are collapsed. Throws DomainError on out-of-range ids.
  InteractionMatrix(std::size_t num_users, std::size_t num_items,
                    std::vector<Interaction> pairs);

  std::size_t num_users() const { return row_offsets_.empty() ? 0 : row_offsets_.size() - 1; }
  std::size_t num_items() const { return num_items_; }
  std::size_t num_interactions() const { return row_items_.size(); }

  std::span<const ItemId> row(UserId u) const {
    return {row_items_.data() + row_offsets_[u],
            row_items_.data() + row_offsets_[u + 1]};
  }
  std::span<const UserId> col(ItemId i) const {
    return {col_users_.data() + col_offsets_[i],
            col_users_.data() + col_offsets_[i + 1]};
  }
  // Edge ids of the item column, aligned with col(i).
  std::span<const EdgeId> col_edges(ItemId i) const {
    return {col_edge_ids_.data() + col_offsets_[i],
            col_edge_ids_.data() + col_offsets_[i + 1]};
  }

  EdgeId row_offset(UserId u) const { return row_offsets_[u]; }
  UserId edge_user(EdgeId e) const { return edge_users_[e]; }
  ItemId edge_item(EdgeId e) const { return row_items_[e]; }

  bool contains(UserId u, ItemId i) const;
  std::optional<EdgeId> edge_id(UserId u, ItemId i) const;

  // All pairs in (user, item) order.
  std::vector<Interaction> interactions() const;

  friend bool operator==(const InteractionMatrix&, const InteractionMatrix&) = default;

 private:
  std::size_t num_items_ = 0;
  std::vector<EdgeId> row_offsets_;
  std::vector<ItemId> row_items_;
  std::vector<UserId> edge_users_;
  std::vector<EdgeId> col_offsets_;
  std::vector<UserId> col_users_;
  std::vector<EdgeId> col_edge_ids_;
};

struct DatasetSplit {
  InteractionMatrix train;
  std::vector<Interaction> val;
  std::vector<Interaction> test;
  std::uint64_t seed = 0;
};

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

// Result of preprocessing: the matrix plus the dense-id to raw-key maps.
struct PreprocessedData {
  InteractionMatrix matrix;
  std::vector<std::string> user_keys;
  std::vector<std::string> item_keys;
};

std::vector<RawRating> load_interactions(const std::filesystem::path& path,
                                         RatingFormat format);
std::vector<RawRating> parse_interactions(std::istream& in,
                                          RatingFormat format);

// Keeps ratings strictly above positive_threshold (missing ratings count as
// positive), then drops users and items with degree < min_degree until a
// fixpoint is reached. Ids are remapped densely by first appearance.
PreprocessedData preprocess_implicit(std::span<const RawRating> ratings,
                                     double positive_threshold,
                                     std::size_t min_degree);

// Per-user holdout: floor(val*n) to val, floor(test*n) to test, the rest to
// train, never leaving a user without a training interaction.
DatasetSplit split_holdout(const InteractionMatrix& matrix, SplitRatios ratios,
                           std::uint64_t seed);

// Per-user (val, test) counts for a user with n interactions.
std::pair<std::size_t, std::size_t> holdout_counts(std::size_t n,
                                                   SplitRatios ratios);

struct DegreeVectors {
  std::vector<std::size_t> users;
  std::vector<std::size_t> items;
};

DegreeVectors degree_vectors(const InteractionMatrix& matrix);

// Canonical text snapshot: "users=<n> items=<m> interactions=<k>" followed by
// one sorted "u<TAB>i" line per interaction.
void write_snapshot(std::ostream& out, const InteractionMatrix& matrix);
void write_snapshot(const std::filesystem::path& path,
                    const InteractionMatrix& matrix);
InteractionMatrix read_snapshot(std::istream& in);
InteractionMatrix read_snapshot(const std::filesystem::path& path);

// Latent-factor generator for synthetic rating files. Users and items get
// Gaussian factors; each user rates a Poisson-ish number of items drawn by a
// softmax over affinity, and ratings 1..5 follow the affinity quantile.
struct SyntheticConfig {
  std::size_t num_users = 200;
  std::size_t num_items = 300;
  std::size_t latent_dim = 8;
  double mean_items_per_user = 20.0;
  double popularity_skew = 1.0;
  double temperature = 1.0;
  std::uint64_t seed = 1;
};

std::vector<RawRating> synthesize_ratings(const SyntheticConfig& config);

// Writes ratings in the given format (inverse of parse_interactions).
void write_ratings(std::ostream& out, std::span<const RawRating> ratings,
                   RatingFormat format);

}  // namespace cfx::data
