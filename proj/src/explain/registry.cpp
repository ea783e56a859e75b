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

#include "cfx/explain/registry.hpp"

#include <string>

namespace cfx::explain {

ImplicitMask Explainer::explain_implicit(const ExplainContext&,
                                         const ExplanationTarget&) const {
  throw DomainError(std::string(name()) + " has no implicit format");
}

ExplicitPerturbation Explainer::explain_explicit(const ExplainContext&,
                                                 const ExplanationTarget&) const {
  throw DomainError(std::string(name()) + " has no explicit format");
}

namespace {

using rec::ModelKind;

class LimeExplainer final : public Explainer {
 public:
  explicit LimeExplainer(LimeConfig c) : c_(c) {}
  std::string_view name() const override { return "lime"; }
  bool supports(Format f, Level, ModelKind) const override { return f == Format::kImplicit; }
  ImplicitMask explain_implicit(const ExplainContext& ctx,
                                const ExplanationTarget& t) const override {
    return explain_lime_rs(ctx, t, c_);
  }

 private:
  LimeConfig c_;
};

class ShapExplainer final : public Explainer {
 public:
  explicit ShapExplainer(ShapConfig c) : c_(c) {}
  std::string_view name() const override { return "shap"; }
  bool supports(Format f, Level, ModelKind) const override { return f == Format::kImplicit; }
  ImplicitMask explain_implicit(const ExplainContext& ctx,
                                const ExplanationTarget& t) const override {
    return explain_shap(ctx, t, c_);
  }

 private:
  ShapConfig c_;
};

class PrinceExplainer final : public Explainer {
 public:
  explicit PrinceExplainer(PrinceConfig c) : c_(c) {}
  std::string_view name() const override { return "prince"; }
  bool supports(Format f, Level l, ModelKind) const override {
    return f == Format::kExplicit && l == Level::kItem;
  }
  ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                        const ExplanationTarget& t) const override {
    return explain_prince(ctx, t, c_);
  }

 private:
  PrinceConfig c_;
};

class AccentExplainer final : public Explainer {
 public:
  explicit AccentExplainer(AccentConfig c) : c_(c) {}
  std::string_view name() const override { return "accent"; }
  bool supports(Format, Level l, ModelKind) const override { return l == Level::kItem; }
  ImplicitMask explain_implicit(const ExplainContext& ctx,
                                const ExplanationTarget& t) const override {
    return explain_accent(ctx, t, c_).mask;
  }
  ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                        const ExplanationTarget& t) const override {
    return explain_accent(ctx, t, c_).perturbation;
  }

 private:
  AccentConfig c_;
};

class LxrExplainer final : public Explainer {
 public:
  explicit LxrExplainer(LxrConfig c) : c_(c) {}
  std::string_view name() const override { return "lxr"; }
  bool supports(Format, Level, ModelKind m) const override { return m == ModelKind::kMF; }
  bool needs_training_users() const override { return true; }
  void prepare(const rec::Recommender& model,
               std::span<const UserId> training_users) override {
    const auto* mf = dynamic_cast<const rec::MFModel*>(&model);
    if (mf == nullptr) throw DomainError("LXR explains MF recommenders only");
    network_ = train_lxr(*mf, training_users, c_);
    trained_ = true;
  }
  ImplicitMask explain_implicit(const ExplainContext& ctx,
                                const ExplanationTarget& t) const override {
    check();
    return explain_lxr(network_, ctx, t);
  }
  ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                        const ExplanationTarget& t) const override {
    check();
    return explain_lxr_explicit(network_, ctx, t);
  }

 private:
  void check() const {
    if (!trained_) throw ConfigError("LXR network used before training");
  }
  LxrConfig c_;
  LxrNetwork network_;
  bool trained_ = false;
};

class CfMaskExplainer final : public Explainer {
 public:
  CfMaskExplainer(std::string_view name, CfMaskConfig c, CfVariant v) : name_(name), c_(c) {
    c_.variant = v;
  }
  std::string_view name() const override { return name_; }
  bool supports(Format f, Level, ModelKind m) const override {
    return f == Format::kExplicit && m == ModelKind::kLightGCN;
  }
  bool uses_scope() const override { return true; }
  ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                        const ExplanationTarget& t) const override {
    const auto* gcn = dynamic_cast<const rec::LightGCNModel*>(ctx.model);
    if (gcn == nullptr) throw DomainError(name_ + " needs a LightGCN recommender");
    return explain_cf_mask(*gcn, ctx, t, c_);
  }

 private:
  std::string name_;
  CfMaskConfig c_;
};

class UnrExplainer final : public Explainer {
 public:
  explicit UnrExplainer(UnrConfig c) : c_(c) {}
  std::string_view name() const override { return "unr"; }
  bool supports(Format f, Level, ModelKind m) const override {
    return f == Format::kExplicit && m == ModelKind::kLightGCN;
  }
  bool uses_scope() const override { return true; }
  ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                        const ExplanationTarget& t) const override {
    return explain_unr(ctx, t, c_);
  }

 private:
  UnrConfig c_;
};

class RandomExplainer final : public Explainer {
 public:
  explicit RandomExplainer(std::uint64_t seed) : seed_(seed) {}
  std::string_view name() const override { return "random"; }
  bool supports(Format f, Level, ModelKind) const override { return f == Format::kImplicit; }
  ImplicitMask explain_implicit(const ExplainContext& ctx,
                                const ExplanationTarget&) const override {
    return explain_random(ctx, seed_);
  }

 private:
  std::uint64_t seed_;
};

class NullExplainer final : public Explainer {
 public:
  std::string_view name() const override { return "null"; }
  bool supports(Format, Level, ModelKind) const override { return true; }
  ImplicitMask explain_implicit(const ExplainContext& ctx,
                                const ExplanationTarget&) const override {
    ImplicitMask m;
    m.items = ctx.history;
    m.scores.assign(ctx.history.size(), 0.0);
    return m;
  }
  ExplicitPerturbation explain_explicit(const ExplainContext&,
                                        const ExplanationTarget&) const override {
    return {};
  }
};

class RemoveAllExplainer final : public Explainer {
 public:
  std::string_view name() const override { return "remove_all"; }
  bool supports(Format f, Level, ModelKind) const override { return f == Format::kExplicit; }
  ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                        const ExplanationTarget& t) const override {
    ExplicitPerturbation p;
    p.removed = user_edges(ctx, ctx.history);
    p.success = is_counterfactual(ctx, ctx.state_with({}), t);
    p.queries_used = 1;
    return p;
  }
};

}  // namespace

std::unique_ptr<Explainer> make_explainer(std::string_view name,
                                          const ExplainerSettings& s) {
  if (name == "lime") return std::make_unique<LimeExplainer>(s.lime);
  if (name == "shap") return std::make_unique<ShapExplainer>(s.shap);
  if (name == "prince") return std::make_unique<PrinceExplainer>(s.prince);
  if (name == "accent") return std::make_unique<AccentExplainer>(s.accent);
  if (name == "lxr") return std::make_unique<LxrExplainer>(s.lxr);
  if (name == "cfgnn") return std::make_unique<CfMaskExplainer>(name, s.cf, CfVariant::kCfGnn);
  if (name == "cf2") return std::make_unique<CfMaskExplainer>(name, s.cf, CfVariant::kCf2);
  if (name == "c2ste") return std::make_unique<CfMaskExplainer>(name, s.cf, CfVariant::kC2Ste);
  if (name == "unr") return std::make_unique<UnrExplainer>(s.unr);
  if (name == "random") return std::make_unique<RandomExplainer>(s.random_seed);
  if (name == "null") return std::make_unique<NullExplainer>();
  if (name == "remove_all") return std::make_unique<RemoveAllExplainer>();
  throw ConfigError("unknown explainer: " + std::string(name));
}

std::vector<std::string> explainer_names() {
  return {"lime", "shap",  "prince", "accent", "lxr",  "cfgnn",
          "cf2",  "c2ste", "unr",    "random", "null", "remove_all"};
}

}  // namespace cfx::explain
