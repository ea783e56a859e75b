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


#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "doctest.h"
#include "support.hpp"
#include "cfx/explain/registry.hpp"
#include "cfx/metrics/metrics.hpp"
#include "cfx/scope/scope.hpp"

using namespace cfx;
using namespace cfx::explain;
using doctest::Approx;

namespace {

// Target item scores sum(w_j) over the kept history; every other item scores 0.
class LinearStub final : public rec::Recommender {
 public:
  LinearStub(std::shared_ptr<const data::InteractionMatrix> g, ItemId target,
             std::vector<double> weights)
      : g_(std::move(g)), target_(target), w_(std::move(weights)) {}
  rec::ModelKind kind() const override { return rec::ModelKind::kMF; }
  const data::InteractionMatrix& graph() const override { return *g_; }
  std::vector<double> score_all(const rec::UserState& s) const override {
    std::vector<double> out(g_->num_items(), 0.0);
    for (ItemId j : s.history) out[target_] += w_[j];
    return out;
  }

 private:
  std::shared_ptr<const data::InteractionMatrix> g_;
  ItemId target_;
  std::vector<double> w_;
};

std::vector<double> shapley_oracle(std::size_t n, const std::function<double(unsigned)>& v) {
  std::vector<double> phi(n, 0.0);
  std::vector<double> fact(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
  for (unsigned s = 0; s < (1u << n); ++s) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(s));
    for (std::size_t j = 0; j < n; ++j) {
      if (s & (1u << j)) continue;
      const double w = fact[size] * fact[n - size - 1] / fact[n];
      phi[j] += w * (v(s | (1u << j)) - v(s));
    }
  }
  return phi;
}

std::vector<ItemId> subset_of(const std::vector<ItemId>& items, unsigned mask) {
  std::vector<ItemId> out;
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (mask & (1u << j)) out.push_back(items[j]);
  }
  return out;
}

// Smallest removal (by size) from the user's history that flips the target.
std::size_t exhaustive_minimal(const ExplainContext& ctx, const ExplanationTarget& target) {
  const std::size_t n = ctx.history.size();
  std::size_t best = n + 1;
  for (unsigned s = 1; s < (1u << n); ++s) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(s));
    if (size >= best) continue;
    const auto kept = subset_of(ctx.history, ((1u << n) - 1) & ~s);
    if (is_counterfactual(ctx, ctx.state_with(kept), target)) best = size;
  }
  return best;
}

rec::MFModel trained_mf(std::uint64_t seed, std::size_t users = 120, std::size_t items = 80) {
  const auto split = testing::synthetic_split(users, items, 12, seed);
  rec::MFConfig c;
  c.dim = 8;
  c.epochs = 20;
  return rec::train_mf(split, c);
}

}  // namespace

TEST_SUITE("explain") {

TEST_CASE("targets and names") {
  rec::RankedList top{{4, 2, 9}, {3.0, 2.0, 1.0}};
  const auto t = ExplanationTarget::item_level(top, 3, 2);
  CHECK(*t.item == 2);
  CHECK_THROWS_AS(ExplanationTarget::item_level(top, 3, 0), DomainError);
  CHECK_THROWS_AS(ExplanationTarget::item_level(top, 3, 4), DomainError);
  const auto l = ExplanationTarget::list_level(top, 3);
  CHECK_FALSE(l.item);
  CHECK(parse_level(level_name(Level::kList)) == Level::kList);
  CHECK(parse_format(format_name(Format::kExplicit)) == Format::kExplicit);
  CHECK_THROWS_AS(parse_level("both"), ConfigError);
}

TEST_CASE("perturbation sequence removal counts") {
  for (std::size_t t = 1; t <= 10; ++t) CHECK(removal_count(10, t, 10) == t);
  const std::vector<std::size_t> expect{0, 1, 1, 1, 2, 2, 2, 2, 3, 3};
  for (std::size_t t = 1; t <= 10; ++t) CHECK(removal_count(3, t, 10) == expect[t - 1]);
  CHECK_THROWS_AS(removal_count(3, 1, 0), ConfigError);
}

TEST_CASE("perturbation sequence order") {
  ImplicitMask m;
  m.items = {3, 5, 8, 11};
  m.scores = {0.2, 0.9, 0.2, -1.0};
  const auto seq = build_perturbation_sequence(m, 4);
  CHECK(seq.pos[0] == std::vector<ItemId>{3, 8, 11});
  CHECK(seq.pos[1] == std::vector<ItemId>{8, 11});  // tie: lower item first
  CHECK(seq.neg[0] == std::vector<ItemId>{3, 5, 8});
  CHECK(seq.neg[1] == std::vector<ItemId>{5, 8});
  CHECK(seq.pos.back().empty());
  CHECK(seq.neg.back().empty());
}

TEST_CASE("LIME recovers a planted linear model") {
  auto g = testing::make_graph(1, 10, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  const std::vector<double> w{0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0, 0, 0, 0};
  const LinearStub stub(g, 7, w);
  const auto ctx = ExplainContext::make(stub, 0);
  const auto top = stub.top_k(ctx.original_state(), ctx.pool, 1);
  REQUIRE(top.items[0] == 7);
  const auto target = ExplanationTarget::item_level(top, 1, 1);
  LimeConfig c;
  c.n_samples = 400;
  const auto mask = explain_lime_rs(ctx, target, c);
  REQUIRE(mask.items == ctx.history);
  CHECK_FALSE(mask.fallback);
  // order of coefficients matches the true weights
  std::vector<std::size_t> a(6), b(6);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  std::sort(a.begin(), a.end(), [&](auto x, auto y) { return mask.scores[x] > mask.scores[y]; });
  std::sort(b.begin(), b.end(), [&](auto x, auto y) { return w[x] > w[y]; });
  CHECK(a == b);
  // R^2 of the recovered coefficients on fresh subsets
  Rng rng(5);
  std::vector<double> truth, pred;
  for (int s = 0; s < 200; ++s) {
    double t = 0, p = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      if (rng.uniform() < 0.5) {
        t += w[j];
        p += mask.scores[j];
      }
    }
    truth.push_back(t);
    pred.push_back(p);
  }
  const double shift = (std::accumulate(truth.begin(), truth.end(), 0.0) -
                        std::accumulate(pred.begin(), pred.end(), 0.0)) / truth.size();
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / truth.size();
  double ss_res = 0, ss_tot = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    ss_res += std::pow(truth[k] - pred[k] - shift, 2);
    ss_tot += std::pow(truth[k] - mean, 2);
  }
  CHECK(1.0 - ss_res / ss_tot >= 0.99);
}

TEST_CASE("LIME with one interaction is a two-point fit") {
  auto g = testing::make_graph(1, 5, {{0, 2}});
  const LinearStub stub(g, 4, {0, 0, 0.8, 0, 0});
  const auto ctx = ExplainContext::make(stub, 0);
  const auto top = stub.top_k(ctx.original_state(), ctx.pool, 1);
  const auto target = ExplanationTarget::item_level(top, 1, 1);
  const auto mask = explain_lime_rs(ctx, target, LimeConfig{});
  REQUIRE(mask.scores.size() == 1);
  CHECK(mask.scores[0] == Approx(0.8).epsilon(1e-2));
}

TEST_CASE("LIME and random masks are deterministic") {
  const auto m = trained_mf(3);
  const auto ctx = ExplainContext::make(m, 5);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 3);
  const auto target = ExplanationTarget::item_level(top, 3, 1);
  CHECK(explain_lime_rs(ctx, target, {}).scores == explain_lime_rs(ctx, target, {}).scores);
  CHECK(explain_random(ctx, 4).scores == explain_random(ctx, 4).scores);
  CHECK(explain_random(ctx, 4).scores != explain_random(ctx, 5).scores);
}

TEST_CASE("SHAP is exact on a linear value function") {
  auto g = testing::make_graph(1, 4, {{0, 0}, {0, 1}});
  const LinearStub stub(g, 3, {0.3, 0.5, 0, 0});
  const auto ctx = ExplainContext::make(stub, 0);
  const auto top = stub.top_k(ctx.original_state(), ctx.pool, 1);
  const auto target = ExplanationTarget::item_level(top, 1, 1);
  const auto exact = explain_shap(ctx, target, ShapConfig{});
  CHECK(exact.scores[0] == Approx(0.3).epsilon(1e-12));
  CHECK(exact.scores[1] == Approx(0.5).epsilon(1e-12));
  ShapConfig mc;
  mc.exact_limit = 0;
  mc.n_permutations = 8;
  const auto sampled = explain_shap(ctx, target, mc);
  CHECK(sampled.scores[0] == Approx(0.3).epsilon(1e-12));
  CHECK(sampled.scores[1] == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact Shapley table matches permutation enumeration") {
  const std::size_t n = 4;
  std::vector<double> v(1u << n);
  Rng rng(3);
  for (auto& x : v) x = rng.normal();
  const auto phi = exact_shapley(n, v);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  std::vector<double> oracle(n, 0.0);
  int count = 0;
  do {
    unsigned s = 0;
    for (auto j : perm) {
      oracle[j] += v[s | (1u << j)] - v[s];
      s |= 1u << j;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t j = 0; j < n; ++j) CHECK(phi[j] == Approx(oracle[j] / count).epsilon(1e-12));
  CHECK_THROWS_AS(exact_shapley(31, v), DomainError);
  CHECK_THROWS_AS(exact_shapley(3, v), DomainError);
}

TEST_CASE("SHAP on MF: sampling tracks the subset oracle and exact mode is efficient") {
  auto g = testing::random_graph(2, 16, 0.4, 77);
  std::vector<data::Interaction> pairs;
  for (ItemId i = 0; i < 6; ++i) pairs.emplace_back(0, i * 2);
  for (auto p : g->interactions()) {
    if (p.first == 1) pairs.push_back(p);
  }
  auto g6 = testing::make_graph(2, 16, pairs);
  const auto m = testing::random_mf(g6, 4, 78);
  const auto ctx = ExplainContext::make(m, 0);
  REQUIRE(ctx.history.size() == 6);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 3);
  const auto target = ExplanationTarget::item_level(top, 3, 1);
  const ItemId t = *target.item;
  const auto oracle = shapley_oracle(6, [&](unsigned s) {
    return m.score(subset_of(ctx.history, s), t);
  });

  const auto exact = explain_shap(ctx, target, ShapConfig{});
  double total = 0;
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(exact.scores[j] == Approx(oracle[j]).epsilon(1e-9));
    total += exact.scores[j];
  }
  CHECK(std::abs(total - (m.score(ctx.history, t) - m.score({}, t))) < 1e-6);

  ShapConfig mc;
  mc.exact_limit = 0;
  mc.n_permutations = 20000;
  const auto sampled = explain_shap(ctx, target, mc);
  double mae = 0;
  for (std::size_t j = 0; j < 6; ++j) mae += std::abs(sampled.scores[j] - oracle[j]) / 6;
  CHECK(mae < 0.01);
}

TEST_CASE("PPR matches a dense linear solve") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto g = testing::random_graph(5, 7, 0.3, 500 + trial);
    const std::size_t nu = 5, n = 12, src = trial % n;
    const double alpha = 0.15;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<std::size_t> nb;
      if (x < nu) {
        for (ItemId i : g->row(x)) nb.push_back(nu + i);
      } else {
        for (UserId u : g->col(x - nu)) nb.push_back(u);
      }
      if (nb.empty()) {
        p(x, src) = 1.0;
      } else {
        for (auto y : nb) p(x, y) += 1.0 / nb.size();
      }
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(src) = alpha;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - (1 - alpha) * p.transpose();
    const Eigen::VectorXd oracle = a.partialPivLu().solve(e);
    const auto pi = personalized_pagerank(*g, src, alpha, 1e-13, 10000);
    double l1 = 0;
    for (std::size_t x = 0; x < n; ++x) l1 += std::abs(pi[x] - oracle(x));
    CHECK(l1 < 1e-8);
  }
}

TEST_CASE("PRINCE and ACCENT remove a forced single interaction") {
  // user 0 holds only item 0; its co-occurrence with item 1 pushes item 1 to the top
  auto g = testing::make_graph(2, 4, {{0, 0}, {1, 0}, {1, 1}, {1, 2}});
  const rec::MFModel m(g, 2, {1, 0, 1, 0, 0, 1, 0, 1}, {0, 0, 0.1, 0.2});
  const auto ctx = ExplainContext::make(m, 0);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 1);
  REQUIRE(top.items[0] == 1);
  const auto target = ExplanationTarget::item_level(top, 1, 1);
  const auto p = explain_prince(ctx, target, PrinceConfig{});
  CHECK(p.success);
  CHECK(p.removed == std::vector<EdgeId>{0});
  const auto a = explain_accent(ctx, target, AccentConfig{});
  CHECK(a.perturbation.success);
  CHECK(a.perturbation.removed == std::vector<EdgeId>{0});
}

TEST_CASE("PRINCE greedy never beats the exhaustive minimum and its successes are real") {
  int successes = 0;
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    auto g = testing::random_graph(4, 8, 0.45, 900 + trial);
    const auto m = testing::random_mf(g, 3, 901 + trial);
    const auto ctx = ExplainContext::make(m, 0);
    const auto top = m.top_k(ctx.original_state(), ctx.pool, 2);
    const auto target = ExplanationTarget::item_level(top, 2, 1);
    const auto p = explain_prince(ctx, target, PrinceConfig{});
    if (!p.success) continue;
    ++successes;
    CHECK(is_counterfactual(ctx, ctx.state_without_edges(p.removed), target));
    CHECK(p.removed.size() >= exhaustive_minimal(ctx, target));
  }
  CHECK(successes > 0);
}

TEST_CASE("ACCENT takes the largest one-step gap reduction first") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto g = testing::random_graph(3, 15, 0.4, 40 + trial);
    const auto m = testing::random_mf(g, 4, 41 + trial);
    const auto ctx = ExplainContext::make(m, 0);
    if (ctx.history.size() < 2) continue;
    const std::size_t k = 3;
    const auto top = m.top_k(ctx.original_state(), ctx.pool, k);
    const auto target = ExplanationTarget::item_level(top, k, 1);
    const ItemId t = *target.item;
    // replacement: K-th best candidate other than t
    const auto ranked = m.rank(ctx.original_state(), ctx.pool);
    std::vector<ItemId> others;
    for (ItemId i : ranked.items) {
      if (i != t) others.push_back(i);
    }
    const ItemId rep = others[k - 1];
    std::size_t best = 0;
    double best_gap = INFINITY;
    for (std::size_t j = 0; j < ctx.history.size(); ++j) {
      const auto kept = rec::remove_items(ctx.history, std::vector<ItemId>{ctx.history[j]});
      const double gap = m.score(kept, t) - m.score(kept, rep);
      if (gap < best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    AccentConfig one;
    one.max_removals = 1;
    const auto r = explain_accent(ctx, target, one);
    REQUIRE(r.perturbation.removed.size() == 1);
    CHECK(m.graph().edge_item(r.perturbation.removed[0]) == ctx.history[best]);
    CHECK(r.mask.scores[best] == *std::max_element(r.mask.scores.begin(), r.mask.scores.end()));
  }
}

TEST_CASE("ACCENT rejects list-level targets") {
  auto g = testing::random_graph(2, 6, 0.5, 1);
  const auto m = testing::random_mf(g, 2, 2);
  const auto ctx = ExplainContext::make(m, 0);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 2);
  CHECK_THROWS_AS(explain_accent(ctx, ExplanationTarget::list_level(top, 2), {}), DomainError);
}

TEST_CASE("LXR sparsity grows with alpha and training is seeded") {
  const auto m = trained_mf(8, 160, 80);
  std::vector<UserId> train, held;
  for (UserId u = 0; u < m.num_users(); ++u) (u % 4 == 0 ? held : train).push_back(u);
  std::vector<double> l1;
  for (double alpha : {0.0, 0.5, 2.0}) {
    LxrConfig c;
    c.alpha_l1 = alpha;
    c.epochs = 5;
    const auto net = train_lxr(m, train, c);
    double total = 0;
    std::size_t n = 0;
    for (UserId u : held) {
      const auto ctx = ExplainContext::make(m, u);
      if (ctx.history.empty()) continue;
      const auto top = m.top_k(ctx.original_state(), ctx.pool, 3);
      const auto mask = explain_lxr(net, ctx, ExplanationTarget::item_level(top, 3, 1));
      for (double s : mask.scores) total += s;
      n += mask.scores.size();
    }
    l1.push_back(total / n);
  }
  CHECK(l1[0] > l1[1]);
  CHECK(l1[1] > l1[2]);

  LxrConfig c;
  c.epochs = 2;
  const auto a = train_lxr(m, train, c);
  const auto b = train_lxr(m, train, c);
  CHECK(diff::flatten(a.net) == diff::flatten(b.net));
}

TEST_CASE("LXR explicit form thresholds at one half") {
  const auto m = trained_mf(9);
  LxrNetwork net;
  net.num_items = m.num_items();
  net.dim = m.dim();
  net.net = diff::TinyMLP::zeros(m.num_items() + 2 * m.dim(), 4, m.num_items());
  std::fill(net.net.b2.begin(), net.net.b2.end(), -3.0);
  const auto ctx = ExplainContext::make(m, 1);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 3);
  const auto target = ExplanationTarget::item_level(top, 3, 1);
  const auto p = explain_lxr_explicit(net, ctx, target);
  CHECK(p.removed.empty());
  CHECK_FALSE(p.success);
  CHECK(explain_lxr(net, ctx, target).scores == explain_lxr(net, ctx, target).scores);
}

TEST_CASE("CF mask variants flip a planted instance") {
  // Find small graphs where exactly one single-edge removal drops the top-1.
  int planted = 0;
  for (std::uint64_t seed = 0; seed < 400 && planted < 5; ++seed) {
    auto g = testing::random_graph(3, 3, 0.6, 7000 + seed);
    if (g->num_interactions() < 4) continue;
    const auto m = testing::random_lightgcn(g, 3, 2, 8000 + seed);
    auto ctx = ExplainContext::make(m, 0);
    if (ctx.pool.size() < 2) continue;
    const auto top = m.top_k(ctx.original_state(), ctx.pool, 1);
    const auto target = ExplanationTarget::item_level(top, 1, 1);
    std::vector<EdgeId> flips;
    for (EdgeId e = 0; e < g->num_interactions(); ++e) {
      if (is_counterfactual(ctx, ctx.state_without_edges(std::vector<EdgeId>{e}), target)) {
        flips.push_back(e);
      }
    }
    if (flips.size() != 1) continue;
    ++planted;
    CAPTURE(seed);
    ctx.scope = scope::extract_scope(*g, 0, top.items, scope::ScopeKind::kFull, 0).edges;
    for (auto v : {CfVariant::kCfGnn, CfVariant::kCf2, CfVariant::kC2Ste}) {
      CfMaskConfig c;
      c.variant = v;
      CfMaskTrace trace;
      const auto p = explain_cf_mask(m, ctx, target, c, &trace);
      CAPTURE(static_cast<int>(v));
      CHECK(p.success);
      if (p.success) CHECK(is_counterfactual(ctx, ctx.state_without_edges(p.removed), target));
      if (v == CfVariant::kCfGnn) {
        CHECK(p.removed.size() <= 2);
        std::size_t last = 0;
        for (auto s : trace.best_size) {
          if (last != 0) CHECK(s <= last);
          if (s != 0) last = s;
        }
      }
    }
  }
  CHECK(planted == 5);
}

TEST_CASE("CF mask: huge beta removes nothing, empty scope is degenerate") {
  auto g = testing::random_graph(3, 4, 0.6, 3);
  const auto m = testing::random_lightgcn(g, 3, 2, 3);
  auto ctx = ExplainContext::make(m, 0);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 1);
  const auto target = ExplanationTarget::item_level(top, 1, 1);
  CHECK_THROWS_AS(explain_cf_mask(m, ctx, target, {}), DegenerateError);
  ctx.scope = scope::extract_scope(*g, 0, top.items, scope::ScopeKind::kFull, 0).edges;
  for (auto v : {CfVariant::kCfGnn, CfVariant::kCf2, CfVariant::kC2Ste}) {
    CfMaskConfig c;
    c.variant = v;
    c.beta = 1e6;
    const auto p = explain_cf_mask(m, ctx, target, c);
    CHECK(p.removed.empty());
    CHECK_FALSE(p.success);
  }
}

TEST_CASE("UNR: forced single edge and single-edge oracle") {
  auto g1 = testing::make_graph(2, 3, {{0, 0}, {1, 0}, {1, 1}});
  const rec::LightGCNModel m1(g1, 2, 1, {1, 0, 0, 1, 1, 0, 0, 1, 0.2, 0.1});
  auto ctx1 = ExplainContext::make(m1, 0);
  ctx1.scope = {0, 1, 2};
  const auto top1 = m1.top_k(ctx1.original_state(), ctx1.pool, 1);
  const auto t1 = ExplanationTarget::item_level(top1, 1, 1);
  const auto r1 = explain_unr(ctx1, t1, UnrConfig{});
  // only subsets rooted at the user's single edge are reachable
  if (r1.success) CHECK(std::find(r1.removed.begin(), r1.removed.end(), 0u) != r1.removed.end());
  CHECK(r1.success == (unr_reward(ctx1, t1, std::vector<EdgeId>{0}) == 1.0 ||
                       unr_reward(ctx1, t1, std::vector<EdgeId>{0, 1}) == 1.0 ||
                       unr_reward(ctx1, t1, std::vector<EdgeId>{0, 1, 2}) == 1.0));

  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto g = testing::random_graph(4, 5, 0.45, 60 + trial);
    const auto m = testing::random_lightgcn(g, 3, 2, 61 + trial);
    auto ctx = ExplainContext::make(m, 0);
    if (ctx.pool.size() < 3) continue;
    ctx.scope = scope::extract_scope(*g, 0, {}, scope::ScopeKind::kFull, 0).edges;
    const auto top = m.top_k(ctx.original_state(), ctx.pool, 2);
    const auto target = ExplanationTarget::list_level(top, 2);
    double best_single = 0;
    for (ItemId i : g->row(0)) {
      best_single = std::max(best_single,
                             unr_reward(ctx, target, std::vector<EdgeId>{*g->edge_id(0, i)}));
    }
    UnrConfig c;
    c.n_iterations = 500;
    const auto r = explain_unr(ctx, target, c);
    CHECK(unr_reward(ctx, target, r.removed) >= best_single);
  }
}

TEST_CASE("registry support matrix") {
  const ExplainerSettings s;
  using rec::ModelKind;
  const auto lime = make_explainer("lime", s);
  CHECK(lime->supports(Format::kImplicit, Level::kList, ModelKind::kLightGCN));
  CHECK_FALSE(lime->supports(Format::kExplicit, Level::kItem, ModelKind::kMF));
  const auto accent = make_explainer("accent", s);
  CHECK(accent->supports(Format::kExplicit, Level::kItem, ModelKind::kMF));
  CHECK_FALSE(accent->supports(Format::kExplicit, Level::kList, ModelKind::kMF));
  const auto lxr = make_explainer("lxr", s);
  CHECK_FALSE(lxr->supports(Format::kImplicit, Level::kItem, ModelKind::kLightGCN));
  CHECK(lxr->needs_training_users());
  for (auto name : {"cfgnn", "cf2", "c2ste", "unr"}) {
    const auto e = make_explainer(name, s);
    CHECK(e->uses_scope());
    CHECK(e->supports(Format::kExplicit, Level::kList, ModelKind::kLightGCN));
    CHECK_FALSE(e->supports(Format::kExplicit, Level::kList, ModelKind::kMF));
  }
  CHECK_THROWS_AS(make_explainer("grease", s), ConfigError);
  for (const auto& name : explainer_names()) CHECK(make_explainer(name, s)->name() == name);

  auto g = testing::random_graph(2, 6, 0.5, 2);
  const auto m = testing::random_mf(g, 2, 2);
  const auto ctx = ExplainContext::make(m, 0);
  const auto top = m.top_k(ctx.original_state(), ctx.pool, 2);
  CHECK_THROWS_AS(lime->explain_explicit(ctx, ExplanationTarget::item_level(top, 2, 1)),
                  DomainError);
  const auto all = make_explainer("remove_all", s);
  const auto p = all->explain_explicit(ctx, ExplanationTarget::list_level(top, 2));
  CHECK(p.removed.size() == ctx.history.size());
}

}
