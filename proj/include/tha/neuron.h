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

#ifndef THA_NEURON_H_
#define THA_NEURON_H_

#include <cstddef>
#include <span>
#include <vector>

namespace tha {

// Fast-sigmoid surrogate parameters. `theta0` is the clamp point of the
// surrogate and stays fixed for the whole run, independent of the annealed
// firing threshold.
struct SurrogateConfig {
  double theta0 = 1.0;
  double k = 1.0;
};

// dz/du substitute: 1 / (1 + k |theta0 - u|)^2.
double SurrogateGrad(double u, const SurrogateConfig& cfg);

// Smooth stand-in for the spike whose exact derivative is SurrogateGrad:
// (u - theta0) / (1 + k |u - theta0|). Only used by gradient reference checks.
double SmoothSpike(double u, const SurrogateConfig& cfg);

// Forward-Euler decay 1 - dt / tau_m. Throws ContractError if dt > tau_m or
// either argument is non-positive.
double BetaFromTau(double tau_m, double dt);

// Discrete-time leaky integrate-and-fire layer with reset by subtraction:
//
//   u[t] = beta * u[t-1] + i[t] - z[t-1] * theta
//   z[t] = 1 if u[t] >= theta else 0
//
// The reset lands one step after the spike. Membrane potentials are not
// clipped from below.
class LifLayer {
 public:
  LifLayer(std::size_t n, double beta, double theta);

  std::size_t size() const { return u_.size(); }
  double beta() const { return beta_; }
  double theta() const { return theta_; }

  // Threshold may only change between forward passes.
  void set_theta(double theta);

  // Zeroes membrane and previous spikes.
  void Reset();

  // Advances one time step. Throws ContractError on a length mismatch and
  // NumericError on non-finite input.
  void Step(std::span<const double> input_current);

  std::span<const double> u() const { return u_; }
  std::span<const double> spikes() const { return z_; }

  // Initial condition other than rest (tests and diagnostics).
  void SetState(std::span<const double> u, std::span<const double> z_prev);

 private:
  double beta_;
  double theta_;
  std::vector<double> u_;
  std::vector<double> z_;
};

}  // namespace tha

#endif  // THA_NEURON_H_
