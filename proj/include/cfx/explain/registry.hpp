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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {

struct ExplainerSettings {
  LimeConfig lime;
  ShapConfig shap;
  PrinceConfig prince;
  AccentConfig accent;
  LxrConfig lxr;
  CfMaskConfig cf;
  UnrConfig unr;
  std::uint64_t random_seed = 17;
};

class Explainer {
 public:
  virtual ~Explainer() = default;

  virtual std::string_view name() const = 0;
  virtual bool supports(Format format, Level level, rec::ModelKind model) const = 0;
  // Graph explainers read ctx.scope.
  virtual bool uses_scope() const { return false; }
  // Pretraining (LXR); a no-op for everything else.
  virtual void prepare(const rec::Recommender& /*model*/,
                       std::span<const UserId> /*training_users*/) {}
  virtual bool needs_training_users() const { return false; }

  // Both throw DomainError for unsupported combinations.
  virtual ImplicitMask explain_implicit(const ExplainContext& ctx,
                                        const ExplanationTarget& target) const;
  virtual ExplicitPerturbation explain_explicit(const ExplainContext& ctx,
                                                const ExplanationTarget& target) const;
};

// Known names: lime, shap, prince, accent, lxr, cfgnn, cf2, c2ste, unr,
// random, plus the stubs null (changes nothing) and remove_all (drops the
// whole history). Throws ConfigError for anything else.
std::unique_ptr<Explainer> make_explainer(std::string_view name,
                                          const ExplainerSettings& settings);

std::vector<std::string> explainer_names();

}  // namespace cfx::explain
