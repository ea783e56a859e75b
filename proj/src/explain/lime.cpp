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

#include <cmath>

#include <Eigen/Dense>

#include "cfx/explain/explainers.hpp"

namespace cfx::explain {
namespace {

std::vector<double> weighted_correlation(const Eigen::MatrixXd& z,
                                         const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& w) {
  const double wsum = w.sum();
  const double my = w.dot(y) / wsum;
  std::vector<double> out(static_cast<std::size_t>(z.cols()), 0.0);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double mz = w.dot(z.col(j)) / wsum;
    double cov = 0.0, vz = 0.0, vy = 0.0;
    for (Eigen::Index s = 0; s < z.rows(); ++s) {
      const double dz = z(s, j) - mz, dy = y(s) - my;
      cov += w(s) * dz * dy;
      vz += w(s) * dz * dz;
      vy += w(s) * dy * dy;
    }
    const double den = std::sqrt(vz * vy);
    out[static_cast<std::size_t>(j)] = den > 0.0 ? cov / den : 0.0;
  }
  return out;
}

}  // namespace

ImplicitMask explain_lime_rs(const ExplainContext& ctx,
                             const ExplanationTarget& target,
                             const LimeConfig& config) {
  const std::size_t n = ctx.history.size();
  if (n == 0) throw DegenerateError("LIME-RS needs a non-empty history");
  if (config.n_samples < 2) throw ConfigError("lime n_samples must be >= 2");
  if (!(config.kernel_width > 0.0)) throw ConfigError("lime kernel_width must be > 0");

  const auto rows = static_cast<Eigen::Index>(config.n_samples);
  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd y(rows), w(rows);
  std::vector<ItemId> kept;
  for (Eigen::Index s = 0; s < rows; ++s) {
    kept.clear();
    for (std::size_t j = 0; j < n; ++j) {
      const ItemId item = ctx.history[j];
      bool keep;
      if (s == 0) {
        keep = true;
      } else if (s == 1) {
        keep = false;
      } else {
        keep = hashed_uniform(config.seed, item, static_cast<std::uint64_t>(s)) <
               config.keep_prob;
      }
      if (keep) {
        z(s, static_cast<Eigen::Index>(j)) = 1.0;
        kept.push_back(item);
      }
    }
    y(s) = target_value(*ctx.model, ctx.state_with(kept), target);
    const double dist = static_cast<double>(n - kept.size()) / static_cast<double>(n);
    w(s) = std::exp(-(dist * dist) / (config.kernel_width * config.kernel_width));
  }

  // Design [1 | z], intercept left unpenalized.
  Eigen::MatrixXd x(rows, cols + 1);
  x.col(0).setOnes();
  x.rightCols(cols) = z;
  Eigen::MatrixXd a = x.transpose() * w.asDiagonal() * x;
  for (Eigen::Index j = 1; j <= cols; ++j) a(j, j) += config.ridge;
  const Eigen::VectorXd b = x.transpose() * (w.array() * y.array()).matrix();

  ImplicitMask mask;
  mask.items = ctx.history;
  mask.queries_used = config.n_samples;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  bool ok = ldlt.info() == Eigen::Success && ldlt.rcond() > 1e-12;
  Eigen::VectorXd beta;
  if (ok) {
    beta = ldlt.solve(b);
    ok = beta.allFinite();
  }
  if (ok) {
    mask.scores.assign(beta.data() + 1, beta.data() + 1 + cols);
  } else {
    mask.scores = weighted_correlation(z, y, w);
    mask.fallback = true;
  }
  return mask;
}

}  // namespace cfx::explain
