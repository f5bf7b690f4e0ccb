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

#include "tha/neuron.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tha/errors.h"

namespace tha {

double SurrogateGrad(double u, const SurrogateConfig& cfg) {
  const double d = 1.0 + cfg.k * std::fabs(cfg.theta0 - u);
  return 1.0 / (d * d);
}

double SmoothSpike(double u, const SurrogateConfig& cfg) {
  const double x = u - cfg.theta0;
  return x / (1.0 + cfg.k * std::fabs(x));
}

double BetaFromTau(double tau_m, double dt) {
  THA_REQUIRE(tau_m > 0.0 && dt > 0.0, "tau_m and dt must be positive");
  THA_REQUIRE(dt <= tau_m, "dt > tau_m would give a negative decay");
  return 1.0 - dt / tau_m;
}

LifLayer::LifLayer(std::size_t n, double beta, double theta)
    : beta_(beta), theta_(theta), u_(n, 0.0), z_(n, 0.0) {
  THA_REQUIRE(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  THA_REQUIRE(theta > 0.0, "theta must be positive");
}

void LifLayer::set_theta(double theta) {
  THA_REQUIRE(theta > 0.0, "theta must be positive");
  theta_ = theta;
}

void LifLayer::Reset() {
  std::fill(u_.begin(), u_.end(), 0.0);
  std::fill(z_.begin(), z_.end(), 0.0);
}

void LifLayer::Step(std::span<const double> input_current) {
  if (input_current.size() != u_.size()) {
    throw ContractError("lif step: input has " +
                        std::to_string(input_current.size()) +
                        " entries, layer has " + std::to_string(u_.size()));
  }
  for (std::size_t j = 0; j < u_.size(); ++j) {
    const double i = input_current[j];
    if (!std::isfinite(i)) {
      throw NumericError("lif step: non-finite input current at neuron " +
                         std::to_string(j));
    }
    const double u = beta_ * u_[j] + i - z_[j] * theta_;
    u_[j] = u;
    z_[j] = u >= theta_ ? 1.0 : 0.0;
  }
}

void LifLayer::SetState(std::span<const double> u,
                        std::span<const double> z_prev) {
  THA_REQUIRE(u.size() == u_.size() && z_prev.size() == z_.size(),
              "state size mismatch");
  std::copy(u.begin(), u.end(), u_.begin());
  for (std::size_t j = 0; j < z_.size(); ++j) {
    THA_REQUIRE(z_prev[j] == 0.0 || z_prev[j] == 1.0, "spikes must be 0/1");
    z_[j] = z_prev[j];
  }
}

}  // namespace tha
