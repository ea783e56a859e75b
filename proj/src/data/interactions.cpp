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

#include "cfx/data/interactions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace cfx::data {

namespace {

std::vector<std::string_view> split_fields(std::string_view line,
                                           std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string_view separator(RatingFormat f) {
  switch (f) {
    case RatingFormat::kTsv:
      return "\t";
    case RatingFormat::kDoubleColon:
      return "::";
    case RatingFormat::kCsv:
      return ",";
  }
  return "\t";
}

}  // namespace

RatingFormat parse_rating_format(std::string_view name) {
  if (name == "tsv") return RatingFormat::kTsv;
  if (name == "double-colon" || name == "dat" || name == "::") {
    return RatingFormat::kDoubleColon;
  }
  if (name == "csv") return RatingFormat::kCsv;
  throw ConfigError("unknown rating format: " + std::string(name));
}

std::string_view rating_format_name(RatingFormat f) {
  switch (f) {
    case RatingFormat::kTsv:
      return "tsv";
    case RatingFormat::kDoubleColon:
      return "double-colon";
    case RatingFormat::kCsv:
      return "csv";
  }
  return "tsv";
}

// ---------------------------------------------------------------------------
// InteractionMatrix

InteractionMatrix::InteractionMatrix(std::size_t num_users,
                                     std::size_t num_items,
                                     std::vector<Interaction> pairs)
    : num_items_(num_items) {
  for (const auto& [u, i] : pairs) {
    if (u >= num_users || i >= num_items) {
      throw DomainError("interaction (" + std::to_string(u) + ", " +
                        std::to_string(i) + ") outside " +
                        std::to_string(num_users) + "x" +
                        std::to_string(num_items));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  row_offsets_.assign(num_users + 1, 0);
  row_items_.reserve(pairs.size());
  edge_users_.reserve(pairs.size());
  for (const auto& [u, i] : pairs) {
    ++row_offsets_[u + 1];
    row_items_.push_back(i);
    edge_users_.push_back(u);
  }
  std::partial_sum(row_offsets_.begin(), row_offsets_.end(),
                   row_offsets_.begin());

  col_offsets_.assign(num_items + 1, 0);
  for (const auto& [u, i] : pairs) ++col_offsets_[i + 1];
  std::partial_sum(col_offsets_.begin(), col_offsets_.end(),
                   col_offsets_.begin());
  col_users_.resize(pairs.size());
  col_edge_ids_.resize(pairs.size());
  std::vector<EdgeId> cursor(col_offsets_.begin(), col_offsets_.end() - 1);
  // Row-major traversal fills each column in ascending user order.
  for (EdgeId e = 0; e < pairs.size(); ++e) {
    const ItemId i = pairs[e].second;
    col_users_[cursor[i]] = pairs[e].first;
    col_edge_ids_[cursor[i]] = e;
    ++cursor[i];
  }
}

bool InteractionMatrix::contains(UserId u, ItemId i) const {
  return edge_id(u, i).has_value();
}

std::optional<EdgeId> InteractionMatrix::edge_id(UserId u, ItemId i) const {
  if (u >= num_users()) return std::nullopt;
  const auto r = row(u);
  const auto it = std::lower_bound(r.begin(), r.end(), i);
  if (it == r.end() || *it != i) return std::nullopt;
  return row_offsets_[u] + static_cast<EdgeId>(it - r.begin());
}

std::vector<Interaction> InteractionMatrix::interactions() const {
  std::vector<Interaction> out;
  out.reserve(num_interactions());
  for (EdgeId e = 0; e < num_interactions(); ++e) {
    out.emplace_back(edge_users_[e], row_items_[e]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

std::vector<RawRating> parse_interactions(std::istream& in,
                                          RatingFormat format) {
  const std::string_view sep = separator(format);
  std::vector<RawRating> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view, sep);
    if (fields.size() < 2 || fields.size() > 4) {
      throw ParseError(line_no, "expected 2 to 4 fields, got " +
                                    std::to_string(fields.size()));
    }
    RawRating r;
    r.user_key = std::string(trim(fields[0]));
    r.item_key = std::string(trim(fields[1]));
    if (r.user_key.empty() || r.item_key.empty()) {
      throw ParseError(line_no, "empty user or item key");
    }
    if (fields.size() >= 3 && !trim(fields[2]).empty()) {
      double v = 0.0;
      if (!parse_number(trim(fields[2]), v) || !std::isfinite(v)) {
        throw ParseError(line_no, "bad rating '" + std::string(fields[2]) + "'");
      }
      r.rating = v;
    }
    if (fields.size() == 4 && !trim(fields[3]).empty()) {
      std::int64_t ts = 0;
      if (!parse_number(trim(fields[3]), ts)) {
        throw ParseError(line_no,
                         "bad timestamp '" + std::string(fields[3]) + "'");
      }
      r.timestamp = ts;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RawRating> load_interactions(const std::filesystem::path& path,
                                         RatingFormat format) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rating file: " + path.string());
  return parse_interactions(in, format);
}

void write_ratings(std::ostream& out, std::span<const RawRating> ratings,
                   RatingFormat format) {
  const std::string_view sep = separator(format);
  for (const auto& r : ratings) {
    out << r.user_key << sep << r.item_key;
    if (r.rating || r.timestamp) {
      out << sep;
      if (r.rating) out << *r.rating;
    }
    if (r.timestamp) out << sep << *r.timestamp;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Preprocessing

PreprocessedData preprocess_implicit(std::span<const RawRating> ratings,
                                     double positive_threshold,
                                     std::size_t min_degree) {
  if (min_degree < 1) throw ConfigError("min_degree must be >= 1");

  // Provisional ids in first-appearance order of surviving ratings.
  std::unordered_map<std::string, std::uint32_t> user_ids, item_ids;
  std::vector<std::string> user_keys, item_keys;
  std::vector<Interaction> pairs;
  for (const auto& r : ratings) {
    if (r.rating && !(*r.rating > positive_threshold)) continue;
    auto [uit, u_new] = user_ids.try_emplace(
        r.user_key, static_cast<std::uint32_t>(user_keys.size()));
    if (u_new) user_keys.push_back(r.user_key);
    auto [iit, i_new] = item_ids.try_emplace(
        r.item_key, static_cast<std::uint32_t>(item_keys.size()));
    if (i_new) item_keys.push_back(r.item_key);
    pairs.emplace_back(uit->second, iit->second);
  }

  // Deduplicate while keeping first-appearance order.
  {
    std::vector<Interaction> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<bool> seen(sorted.size(), false);
    std::vector<Interaction> unique;
    unique.reserve(pairs.size());
    for (const auto& p : pairs) {
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin());
      if (seen[idx]) continue;
      seen[idx] = true;
      unique.push_back(p);
    }
    pairs = std::move(unique);
  }

  // Iterative degree filter.
  std::vector<bool> alive(pairs.size(), true);
  std::vector<std::size_t> udeg(user_keys.size(), 0), ideg(item_keys.size(), 0);
  for (const auto& [u, i] : pairs) {
    ++udeg[u];
    ++ideg[i];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (!alive[e]) continue;
      const auto [u, i] = pairs[e];
      if (udeg[u] < min_degree || ideg[i] < min_degree) {
        alive[e] = false;
        changed = true;
      }
    }
    if (changed) {
      std::fill(udeg.begin(), udeg.end(), 0);
      std::fill(ideg.begin(), ideg.end(), 0);
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if (!alive[e]) continue;
        ++udeg[pairs[e].first];
        ++ideg[pairs[e].second];
      }
    }
  }

  // Dense remap by first appearance among survivors.
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> umap(user_keys.size(), kUnset),
      imap(item_keys.size(), kUnset);
  PreprocessedData out;
  std::vector<Interaction> kept;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    if (!alive[e]) continue;
    auto [u, i] = pairs[e];
    if (umap[u] == kUnset) {
      umap[u] = static_cast<std::uint32_t>(out.user_keys.size());
      out.user_keys.push_back(user_keys[u]);
    }
    if (imap[i] == kUnset) {
      imap[i] = static_cast<std::uint32_t>(out.item_keys.size());
      out.item_keys.push_back(item_keys[i]);
    }
    kept.emplace_back(umap[u], imap[i]);
  }
  if (kept.empty()) {
    throw EmptyDatasetError("no interactions left after filtering (threshold " +
                            std::to_string(positive_threshold) +
                            ", min degree " + std::to_string(min_degree) + ")");
  }
  out.matrix = InteractionMatrix(out.user_keys.size(), out.item_keys.size(),
                                 std::move(kept));
  return out;
}

// ---------------------------------------------------------------------------
// Splitting

std::pair<std::size_t, std::size_t> holdout_counts(std::size_t n,
                                                   SplitRatios ratios) {
  auto val = static_cast<std::size_t>(std::floor(ratios.val * static_cast<double>(n) + 1e-9));
  auto test = static_cast<std::size_t>(std::floor(ratios.test * static_cast<double>(n) + 1e-9));
  if (n == 0) return {0, 0};
  // Keep at least one training interaction.
  while (val + test >= n) {
    if (test > 0) {
      --test;
    } else {
      --val;
    }
  }
  return {val, test};
}

DatasetSplit split_holdout(const InteractionMatrix& matrix, SplitRatios ratios,
                           std::uint64_t seed) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  DatasetSplit split;
  split.seed = seed;
  std::vector<Interaction> train;
  train.reserve(matrix.num_interactions());
  for (UserId u = 0; u < matrix.num_users(); ++u) {
    const auto row = matrix.row(u);
    std::vector<ItemId> items(row.begin(), row.end());
    Rng rng(mix_seed(seed, u));
    rng.shuffle(items);
    const auto [nval, ntest] = holdout_counts(items.size(), ratios);
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (k < nval) {
        split.val.emplace_back(u, items[k]);
      } else if (k < nval + ntest) {
        split.test.emplace_back(u, items[k]);
      } else {
        train.emplace_back(u, items[k]);
      }
    }
  }
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  split.train =
      InteractionMatrix(matrix.num_users(), matrix.num_items(), std::move(train));
  return split;
}

DegreeVectors degree_vectors(const InteractionMatrix& matrix) {
  DegreeVectors d;
  d.users.resize(matrix.num_users());
  d.items.resize(matrix.num_items());
  for (UserId u = 0; u < matrix.num_users(); ++u) d.users[u] = matrix.row(u).size();
  for (ItemId i = 0; i < matrix.num_items(); ++i) d.items[i] = matrix.col(i).size();
  return d;
}

// ---------------------------------------------------------------------------
// Snapshots

void write_snapshot(std::ostream& out, const InteractionMatrix& matrix) {
  out << "users=" << matrix.num_users() << " items=" << matrix.num_items()
      << " interactions=" << matrix.num_interactions() << '\n';
  for (const auto& [u, i] : matrix.interactions()) out << u << '\t' << i << '\n';
}

void write_snapshot(const std::filesystem::path& path,
                    const InteractionMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write snapshot: " + path.string());
  write_snapshot(out, matrix);
}

InteractionMatrix read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing snapshot header");
  std::size_t users = 0, items = 0, count = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    int seen = 0;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError(1, "bad header token " + tok);
      const std::string key = tok.substr(0, eq);
      std::size_t value = 0;
      if (!parse_number(std::string_view(tok).substr(eq + 1), value)) {
        throw ParseError(1, "bad header value " + tok);
      }
      if (key == "users") {
        users = value;
      } else if (key == "items") {
        items = value;
      } else if (key == "interactions") {
        count = value;
      } else {
        throw ParseError(1, "unknown header key " + key);
      }
      ++seen;
    }
    if (seen != 3) throw ParseError(1, "header needs users, items, interactions");
  }
  std::vector<Interaction> pairs;
  pairs.reserve(count);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view, "\t");
    UserId u = 0;
    ItemId i = 0;
    if (fields.size() != 2 || !parse_number(fields[0], u) ||
        !parse_number(fields[1], i)) {
      throw ParseError(line_no, "expected '<user>\\t<item>'");
    }
    pairs.emplace_back(u, i);
  }
  if (pairs.size() != count) {
    throw ParseError(line_no, "header promises " + std::to_string(count) +
                                  " interactions, found " +
                                  std::to_string(pairs.size()));
  }
  return InteractionMatrix(users, items, std::move(pairs));
}

InteractionMatrix read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot: " + path.string());
  return read_snapshot(in);
}

// ---------------------------------------------------------------------------
// Synthetic data

std::vector<RawRating> synthesize_ratings(const SyntheticConfig& config) {
  if (config.num_users == 0 || config.num_items == 0 || config.latent_dim == 0) {
    throw ConfigError("synthetic dataset dimensions must be positive");
  }
  Rng rng(config.seed);
  const std::size_t dim = config.latent_dim;
  std::vector<double> uf(config.num_users * dim), vf(config.num_items * dim),
      pop(config.num_items);
  for (auto& x : uf) x = rng.normal();
  for (auto& x : vf) x = rng.normal();
  for (auto& x : pop) x = config.popularity_skew * rng.normal();
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));

  std::vector<RawRating> out;
  std::vector<std::pair<double, ItemId>> keyed(config.num_items);
  std::vector<double> affinity(config.num_items);
  std::int64_t clock = 0;
  for (std::size_t u = 0; u < config.num_users; ++u) {
    const double spread = std::exp(0.6 * rng.normal() - 0.18);
    auto n = static_cast<std::size_t>(
        std::lround(config.mean_items_per_user * spread));
    n = std::clamp<std::size_t>(n, 3, std::max<std::size_t>(3, config.num_items / 2));
    n = std::min(n, config.num_items);
    for (std::size_t i = 0; i < config.num_items; ++i) {
      double a = pop[i];
      for (std::size_t k = 0; k < dim; ++k) a += norm * uf[u * dim + k] * vf[i * dim + k];
      affinity[i] = a;
      // Gumbel-top-k sampling without replacement.
      double g = rng.uniform();
      while (g <= 0.0) g = rng.uniform();
      keyed[i] = {a / config.temperature - std::log(-std::log(g)),
                  static_cast<ItemId>(i)};
    }
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(n),
                      keyed.end(), [](const auto& a, const auto& b) {
                        return a.first > b.first ||
                               (a.first == b.first && a.second < b.second);
                      });
    std::vector<std::pair<double, ItemId>> chosen;
    chosen.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      chosen.emplace_back(affinity[keyed[k].second], keyed[k].second);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return chosen[a].first > chosen[b].first ||
             (chosen[a].first == chosen[b].first && chosen[a].second < chosen[b].second);
    });
    std::vector<double> rating(n);
    for (std::size_t r = 0; r < n; ++r) {
      const double q = (static_cast<double>(r) + 0.5) / static_cast<double>(n);
      rating[order[r]] = q < 0.45 ? 5.0 : q < 0.75 ? 4.0 : q < 0.9 ? 3.0 : q < 0.97 ? 2.0 : 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
      RawRating r;
      r.user_key = "u" + std::to_string(u);
      r.item_key = "i" + std::to_string(chosen[k].second);
      r.rating = rating[k];
      r.timestamp = clock++;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace cfx::data
