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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracle.h"
#include "tha/errors.h"
#include "tha/rng.h"

namespace tha {
namespace {

using testing::Oracle;
using testing::OracleValue;

std::pair<double, double> StepOnce(double u, double z_prev, double input,
                                   double beta, double theta) {
  LifLayer layer(1, beta, theta);
  const double su[] = {u};
  const double sz[] = {z_prev};
  layer.SetState(su, sz);
  const double in[] = {input};
  layer.Step(in);
  return {layer.u()[0], layer.spikes()[0]};
}

TEST(LifStep, ZeroFixedPoint) {
  const auto [u, z] = StepOnce(0.0, 0.0, 0.0, 0.9, 1.0);
  EXPECT_EQ(u, Oracle()["lif.rest"][0].get<double>());
  EXPECT_EQ(z, 0.0);
}

TEST(LifStep, FiresAtThresholdThenResetsNextStep) {
  LifLayer layer(1, 0.9, 1.0);
  const double one[] = {1.0};
  const double zero[] = {0.0};
  layer.Step(one);
  EXPECT_EQ(layer.u()[0], Oracle()["lif.fire"][0].get<double>());
  EXPECT_EQ(layer.spikes()[0], 1.0);
  layer.Step(zero);
  EXPECT_EQ(layer.u()[0], Oracle()["lif.fire_next"][0].get<double>());
  EXPECT_EQ(layer.spikes()[0], 0.0);
}

TEST(LifStep, InhibitionGoesNegative) {
  const auto [u, z] = StepOnce(0.5, 0.0, -1.0, 0.8, 1.0);
  EXPECT_EQ(u, Oracle()["lif.inhibit"][0].get<double>());
  EXPECT_EQ(z, 0.0);
}

TEST(LifStep, RejectsBadInput) {
  LifLayer layer(2, 0.5, 1.0);
  const double short_in[] = {1.0};
  EXPECT_THROW(layer.Step(short_in), ContractError);
  const double nan_in[] = {0.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(layer.Step(nan_in), NumericError);
  EXPECT_THROW(LifLayer(1, 1.5, 1.0), ContractError);
  EXPECT_THROW(LifLayer(1, 0.5, 0.0), ContractError);
}

TEST(LifProperties, SpikesBinaryAndResetBySubtraction) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.Below(8);
    const double beta = rng.Uniform();
    const double theta = rng.Uniform(0.1, 3.0);
    LifLayer layer(n, beta, theta);
    std::vector<double> in(n);
    for (int t = 0; t < 40; ++t) {
      const std::vector<double> u_prev(layer.u().begin(), layer.u().end());
      const std::vector<double> z_prev(layer.spikes().begin(),
                                       layer.spikes().end());
      for (double& x : in) x = rng.Uniform(-2.0, 3.0);
      layer.Step(in);
      for (std::size_t j = 0; j < n; ++j) {
        const double z = layer.spikes()[j];
        ASSERT_TRUE(z == 0.0 || z == 1.0);
        ASSERT_EQ(z == 1.0, layer.u()[j] >= theta);
        ASSERT_EQ(layer.u()[j], beta * u_prev[j] + in[j] - z_prev[j] * theta);
      }
    }
  }
}

TEST(LifProperties, IntegerLatticeWithBinaryInputs) {
  // beta = 1, {-1, 0, +1} currents, u0 = 0: u = a - b * theta, a, b integers.
  Rng rng(11);
  const double theta = 2.75;
  LifLayer layer(4, 1.0, theta);
  std::vector<double> resets(4, 0.0);
  std::vector<double> sums(4, 0.0);
  std::vector<double> in(4);
  for (int t = 0; t < 200; ++t) {
    for (std::size_t j = 0; j < 4; ++j) resets[j] += layer.spikes()[j];
    for (double& x : in) x = static_cast<double>(rng.Below(3)) - 1.0;
    layer.Step(in);
    for (std::size_t j = 0; j < 4; ++j) {
      sums[j] += in[j];
      ASSERT_EQ(layer.u()[j], sums[j] - resets[j] * theta);
    }
  }
}

TEST(Surrogate, Examples) {
  EXPECT_EQ(SurrogateGrad(10.0, {10.0, 1.0}), OracleValue("surrogate.at_theta0"));
  EXPECT_EQ(SurrogateGrad(0.0, {10.0, 1.0}),
            OracleValue("surrogate.rest_theta10_k1"));
  EXPECT_NEAR(SurrogateGrad(0.0, {10.0, 1.0}), 1.0 / 121.0, 1e-15);
  EXPECT_EQ(SurrogateGrad(-3.7, {2.0, 0.0}), OracleValue("surrogate.k0"));
}

TEST(Surrogate, StrictlyDecreasingInDistance) {
  const SurrogateConfig cfg{5.0, 5.0};
  double prev = SurrogateGrad(5.0, cfg);
  for (double d = 0.01; d < 60.0; d += 0.37) {
    const double above = SurrogateGrad(5.0 + d, cfg);
    const double below = SurrogateGrad(5.0 - d, cfg);
    EXPECT_LT(above, prev);
    EXPECT_DOUBLE_EQ(above, below);
    prev = above;
  }
}

TEST(Surrogate, SmoothSpikeDerivativeIsSurrogate) {
  const SurrogateConfig cfg{1.3, 2.0};
  for (double u : {-3.0, -0.2, 0.9, 1.29, 1.31, 2.5, 8.0}) {
    const double h = 1e-6;
    const double fd = (SmoothSpike(u + h, cfg) - SmoothSpike(u - h, cfg)) / (2 * h);
    EXPECT_NEAR(fd, SurrogateGrad(u, cfg), 1e-8) << "u=" << u;
  }
}

TEST(BetaFromTau, Examples) {
  EXPECT_EQ(BetaFromTau(10.0, 1.0), OracleValue("beta.tau10_dt1"));
  EXPECT_EQ(BetaFromTau(3.0, 3.0), OracleValue("beta.tau_eq_dt"));
  EXPECT_EQ(BetaFromTau(1000.0, 1.0), OracleValue("beta.tau1000_dt1"));
  EXPECT_THROW(BetaFromTau(1.0, 2.0), ContractError);
  EXPECT_THROW(BetaFromTau(0.0, 1.0), ContractError);
}

}  // namespace
}  // namespace tha
