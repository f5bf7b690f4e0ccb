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

#include "tha/anneal.h"

#include <algorithm>
#include <cmath>

#include "tha/errors.h"

namespace tha {

AnnealSchedule::AnnealSchedule(double theta0, double theta_inf, double alpha)
    : theta0_(theta0), theta_inf_(theta_inf), alpha_(alpha), theta_(theta0) {
  THA_REQUIRE(theta0 > 0.0, "theta0 must be positive");
  THA_REQUIRE(theta_inf >= theta0, "theta_inf must not be below theta0");
  THA_REQUIRE(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
}

double AnnealSchedule::Step() {
  theta_ = theta_ + alpha_ * (theta_inf_ - theta_);
  ++gamma_;
  return theta_;
}

double AnnealSchedule::ClosedForm(std::uint64_t gamma) const {
  return ClosedFormTheta(theta0_, theta_inf_, alpha_, gamma);
}

double AnnealSchedule::EvalTheta(double rel_tol) const {
  if (std::fabs(theta_ - theta_inf_) <= rel_tol * theta_inf_) return theta_inf_;
  return theta_;
}

void AnnealSchedule::Restore(double theta, std::uint64_t gamma) {
  THA_REQUIRE(theta > 0.0, "theta must be positive");
  theta_ = theta;
  gamma_ = gamma;
}

double ClosedFormTheta(double theta0, double theta_inf, double alpha,
                       std::uint64_t gamma) {
  return theta_inf -
         std::pow(1.0 - alpha, static_cast<double>(gamma)) * (theta_inf - theta0);
}

std::size_t BoundReport::violation_count() const {
  return static_cast<std::size_t>(
      std::count(violated.begin(), violated.end(), true));
}

BoundReport CheckUpdateBound(double delta_theta, std::span<const double> u_next,
                             double theta_gamma) {
  BoundReport r;
  r.delta_theta = delta_theta;
  r.neurons.resize(u_next.size());
  r.headroom.resize(u_next.size());
  r.violated.resize(u_next.size());
  for (std::size_t j = 0; j < u_next.size(); ++j) {
    r.neurons[j] = j;
    r.headroom[j] = u_next[j] - theta_gamma;
    r.violated[j] = delta_theta >= r.headroom[j];
  }
  return r;
}

RateConstraints CheckRateConstraints(const AnnealSchedule& s,
                                     std::span<const double> z,
                                     std::span<const double> w_col,
                                     std::span<const double> grad_col,
                                     double eta) {
  THA_REQUIRE(z.size() == w_col.size() && z.size() == grad_col.size(),
              "rate constraints: vector lengths differ");
  RateConstraints rc;
  const double a = s.alpha();
  rc.lhs1 = (1.0 - a) * s.theta() + a * s.theta_inf();
  for (std::size_t i = 0; i < z.size(); ++i) {
    rc.rhs1 += z[i] * (w_col[i] + eta * grad_col[i]);
    rc.rhs2 += z[i] * w_col[i];
  }
  rc.c1 = rc.lhs1 < rc.rhs1;
  rc.c2 = s.theta_inf() < rc.rhs2;
  return rc;
}

}  // namespace tha
