// Copyright 2026 The THA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tha/optim.h"

#include <cmath>
#include <numbers>

#include "tha/errors.h"

namespace tha {

void Optimizer::Step(std::span<const std::span<double>> params,
                     std::span<const std::span<const double>> grads,
                     double lr) {
  THA_REQUIRE(params.size() == grads.size(),
              "optimizer: parameter and gradient lists differ");
  if (m_.empty()) {
    m_.resize(params.size());
    if (cfg_.kind == OptimizerKind::kAdam) v_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i].assign(params[i].size(), 0.0);
      if (cfg_.kind == OptimizerKind::kAdam) v_[i].assign(params[i].size(), 0.0);
    }
  }
  THA_REQUIRE(m_.size() == params.size(),
              "optimizer: parameter list changed between steps");
  ++steps_;
  if (cfg_.kind == OptimizerKind::kSgdMomentum) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      THA_REQUIRE(params[i].size() == grads[i].size() &&
                      params[i].size() == m_[i].size(),
                  "optimizer: tensor size mismatch");
      for (std::size_t k = 0; k < params[i].size(); ++k) {
        m_[i][k] = cfg_.momentum * m_[i][k] + grads[i][k];
        params[i][k] -= lr * m_[i][k];
      }
    }
    return;
  }
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(cfg_.beta1, t);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    THA_REQUIRE(params[i].size() == grads[i].size() &&
                    params[i].size() == m_[i].size(),
                "optimizer: tensor size mismatch");
    for (std::size_t k = 0; k < params[i].size(); ++k) {
      const double g = grads[i][k];
      m_[i][k] = cfg_.beta1 * m_[i][k] + (1.0 - cfg_.beta1) * g;
      v_[i][k] = cfg_.beta2 * v_[i][k] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m_[i][k] / c1;
      const double vhat = v_[i][k] / c2;
      params[i][k] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

double CosineLr(double eta0, std::uint64_t gamma, std::uint64_t period) {
  if (period == 0) return eta0;
  const double phase =
      static_cast<double>(gamma % period) / static_cast<double>(period);
  return 0.5 * eta0 * (1.0 + std::cos(std::numbers::pi * phase));
}

double ClipGradients(std::span<const std::span<double>> grads,
                     double max_norm) {
  THA_REQUIRE(max_norm > 0.0, "max_norm must be positive");
  double sq = 0.0;
  for (const auto& g : grads)
    for (double v : g) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& g : grads)
      for (double& v : g) v *= scale;
  }
  return norm;
}

}  // namespace tha
