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

#ifndef THA_ANNEAL_H_
#define THA_ANNEAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tha {

// Per-layer threshold warm-up. theta relaxes exponentially from theta0 to
// theta_inf once per training iteration:
//
//   theta[g+1] = theta[g] + alpha * (theta_inf - theta[g])
//
// The update is applied by the training driver between iterations, never
// inside the time-step loop. A fixed threshold is the alpha = 0 special case.
class AnnealSchedule {
 public:
  AnnealSchedule() = default;
  // Requires theta0 > 0, theta_inf >= theta0, alpha in [0, 1]. Strict
  // inequalities for annealing modes are enforced by config validation.
  AnnealSchedule(double theta0, double theta_inf, double alpha);
  static AnnealSchedule Fixed(double theta) { return {theta, theta, 0.0}; }

  double theta0() const { return theta0_; }
  double theta_inf() const { return theta_inf_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  std::uint64_t gamma() const { return gamma_; }
  bool annealing() const { return alpha_ > 0.0 && theta_inf_ > theta0_; }

  // Advances one iteration and returns the new threshold.
  double Step();

  // theta_inf - (1 - alpha)^gamma * (theta_inf - theta0).
  double ClosedForm(std::uint64_t gamma) const;

  // Test-time threshold: theta_inf once within `rel_tol` of it, otherwise the
  // current theta.
  double EvalTheta(double rel_tol = 1e-3) const;

  // Restores a checkpointed state.
  void Restore(double theta, std::uint64_t gamma);

 private:
  double theta0_ = 1.0;
  double theta_inf_ = 1.0;
  double alpha_ = 0.0;
  double theta_ = 1.0;
  std::uint64_t gamma_ = 0;
};

// Closed form with explicit parameters (also the test oracle's formula).
double ClosedFormTheta(double theta0, double theta_inf, double alpha,
                       std::uint64_t gamma);

// Outcome of comparing a threshold step against spike headroom. For each
// monitored neuron, violated[j] is true iff delta_theta >= headroom[j],
// where headroom = u at the spike time after the weight update - theta
// before the threshold update.
struct BoundReport {
  std::size_t layer = 0;
  std::uint64_t iteration = 0;
  double delta_theta = 0.0;
  std::vector<std::size_t> neurons;  // monitored neuron ids
  std::vector<double> headroom;
  std::vector<bool> violated;

  std::size_t violation_count() const;
};

BoundReport CheckUpdateBound(double delta_theta, std::span<const double> u_next,
                             double theta_gamma);

struct RateConstraints {
  bool c1 = false;  // (1-a) theta + a theta_inf < z . (w + eta g)
  bool c2 = false;  // theta_inf < z . w
  double lhs1 = 0.0;
  double rhs1 = 0.0;
  double rhs2 = 0.0;
};

// Evaluates both annealing-rate constraints for one neuron. `z` is the input
// vector, `w_col` the neuron's incoming weights (current weights stand in for
// the converged ones in c2), `grad_col` the matching loss gradient.
RateConstraints CheckRateConstraints(const AnnealSchedule& s,
                                     std::span<const double> z,
                                     std::span<const double> w_col,
                                     std::span<const double> grad_col,
                                     double eta);

}  // namespace tha

#endif  // THA_ANNEAL_H_
