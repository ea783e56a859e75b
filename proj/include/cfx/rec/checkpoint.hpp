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

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "cfx/rec/recommender.hpp"

namespace cfx::rec {

// Text checkpoint. Layout:
//   cfx-checkpoint 1
//   kind <mf|lightgcn> dim <d> layers <L> users <U> items <I> edges <E>
//   edges            then E lines "u<TAB>i"
//   <table name> <rows> <cols>   then rows lines of hex floats
// MF stores tables item_embeddings and item_bias, LightGCN stores
// initial_embeddings. Hex floats make the reload bit-exact.
void save_model(std::ostream& out, const Recommender& model);
void save_model(const std::filesystem::path& path, const Recommender& model);

std::unique_ptr<Recommender> load_model(std::istream& in);
std::unique_ptr<Recommender> load_model(const std::filesystem::path& path);

}  // namespace cfx::rec
