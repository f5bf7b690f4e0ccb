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

#ifndef THA_OPTIM_H_
#define THA_OPTIM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tha {

enum class OptimizerKind { kSgdMomentum, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First-order optimizer over a fixed list of parameter tensors. Moment
// buffers are created on the first step and keyed by tensor position, so the
// same parameter order must be passed every step.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

  const OptimizerConfig& config() const { return cfg_; }
  std::uint64_t steps() const { return steps_; }

  // SGD:  v <- m v + g;  p <- p - lr v
  // Adam: bias-corrected moments, p <- p - lr mhat / (sqrt(vhat) + eps)
  void Step(std::span<const std::span<double>> params,
            std::span<const std::span<const double>> grads, double lr);

 private:
  OptimizerConfig cfg_;
  std::uint64_t steps_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

// Cosine annealing with warm restarts:
// 0.5 * eta0 * (1 + cos(pi * (gamma mod period) / period)).
// period == 0 means a constant rate.
double CosineLr(double eta0, std::uint64_t gamma, std::uint64_t period);

// Rescales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradients(std::span<const std::span<double>> grads, double max_norm);

}  // namespace tha

#endif  // THA_OPTIM_H_
