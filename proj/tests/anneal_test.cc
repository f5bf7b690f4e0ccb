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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracle.h"
#include "tha/errors.h"
#include "tha/rng.h"

namespace tha {
namespace {

using testing::Oracle;
using testing::OracleValue;

TEST(AnnealStep, Examples) {
  AnnealSchedule s(5.0, 50.0, 5e-3);
  EXPECT_EQ(s.Step(), OracleValue("anneal.step_5_50_5e-3"));
  EXPECT_EQ(s.gamma(), 1u);

  AnnealSchedule at_inf(5.0, 50.0, 0.3);
  at_inf.Restore(50.0, 7);
  EXPECT_EQ(at_inf.Step(), OracleValue("anneal.fixed_point"));

  AnnealSchedule one(5.0, 50.0, 1.0);
  EXPECT_EQ(one.Step(), OracleValue("anneal.alpha1"));
}

TEST(AnnealSchedule, RejectsBadParameters) {
  EXPECT_THROW(AnnealSchedule(0.0, 1.0, 0.1), ContractError);
  EXPECT_THROW(AnnealSchedule(2.0, 1.0, 0.1), ContractError);
  EXPECT_THROW(AnnealSchedule(1.0, 2.0, 1.5), ContractError);
  EXPECT_THROW(AnnealSchedule(1.0, 2.0, -0.1), ContractError);
}

TEST(ClosedForm, Examples) {
  EXPECT_EQ(ClosedFormTheta(5.0, 50.0, 5e-3, 0), 5.0);
  EXPECT_NEAR(ClosedFormTheta(5.0, 50.0, 5e-3, 1),
              OracleValue("anneal.closed_form_gamma1"), 1e-12);
  EXPECT_NEAR(ClosedFormTheta(5.0, 50.0, 5e-3, 100000), 50.0, 1e-12);
}

TEST(ClosedForm, MatchesRecurrenceUpToMillion) {
  Rng rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    const double theta0 = rng.Uniform(0.5, 10.0);
    const double theta_inf = theta0 + rng.Uniform(0.1, 100.0);
    const double alpha = std::pow(10.0, rng.Uniform(-6.0, -1.0));
    AnnealSchedule s(theta0, theta_inf, alpha);
    for (std::uint64_t g = 1; g <= 1000000; ++g) {
      s.Step();
      if (g % 997 == 0 || g == 1000000) {
        ASSERT_LE(std::fabs(s.theta() - s.ClosedForm(g)), 1e-9 * theta_inf)
            << "gamma " << g;
      }
    }
  }
}

TEST(AnnealProperties, MonotoneBoundedGeometricSteps) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta0 = rng.Uniform(0.5, 10.0);
    const double theta_inf = theta0 + rng.Uniform(0.1, 100.0);
    const double alpha = rng.Uniform(1e-4, 0.5);
    AnnealSchedule s(theta0, theta_inf, alpha);
    double prev = s.theta();
    for (std::uint64_t g = 0; g < 200; ++g) {
      const double expected_delta =
          alpha * std::pow(1 - alpha, static_cast<double>(g)) *
          (theta_inf - theta0);
      const double next = s.Step();
      ASSERT_LE(next, theta_inf);
      if (prev < theta_inf && expected_delta > 1e-12 * theta_inf)
        ASSERT_GT(next, prev);
      ASSERT_NEAR(next - prev, expected_delta, 1e-12 * theta_inf);
      prev = next;
    }
  }
  AnnealSchedule s(5.0, 50.0, 5e-3);
  for (int g = 0; g < 10; ++g) s.Step();
  const double before = s.theta();
  EXPECT_NEAR(s.Step() - before, OracleValue("anneal.delta_gamma10"), 1e-12);
}

TEST(EvalTheta, UsesFinalThresholdWhenClose) {
  AnnealSchedule s(5.0, 50.0, 5e-3);
  EXPECT_EQ(s.EvalTheta(), 5.0);
  s.Restore(49.96, 1500);
  EXPECT_EQ(s.EvalTheta(), 50.0);
  s.Restore(49.9, 1200);
  EXPECT_EQ(s.EvalTheta(), 49.9);
  EXPECT_EQ(AnnealSchedule::Fixed(3.0).EvalTheta(), 3.0);
}

TEST(UpdateBound, Examples) {
  const double u[] = {1.5};
  for (const char* key : {"bound.delta0.2", "bound.delta0.6"}) {
    const double delta = std::string(key) == "bound.delta0.2" ? 0.2 : 0.6;
    const BoundReport r = CheckUpdateBound(delta, u, 1.0);
    ASSERT_EQ(r.headroom.size(), 1u);
    EXPECT_EQ(r.headroom[0], Oracle()[key]["headroom"].get<double>());
    EXPECT_EQ(r.violated[0], Oracle()[key]["violated"].get<bool>());
  }
}

TEST(UpdateBound, ZeroDeltaNeverViolatesAtSpikes) {
  Rng rng(10);
  std::vector<double> u(64);
  const double theta = 2.5;
  for (double& v : u) v = theta + rng.Uniform(0.0, 5.0);
  const BoundReport r = CheckUpdateBound(0.0, u, theta);
  EXPECT_EQ(r.violation_count(), 0u);
}

TEST(RateConstraints, Examples) {
  AnnealSchedule s(1.0, 2.0, 0.1);
  const double z[] = {1.0, 0.0, 1.0};
  const double w[] = {1.0, 5.0, 0.5};
  const double g[] = {2.0, 9.0, -2.0};
  const RateConstraints rc = CheckRateConstraints(s, z, w, g, 0.1);
  EXPECT_NEAR(rc.lhs1, OracleValue("rate.lhs_theta1_inf2_a0.1"), 1e-15);
  EXPECT_NEAR(rc.rhs1, 1.5, 1e-15);
  EXPECT_EQ(rc.c1, Oracle()["rate.c1_rhs1.5"].get<bool>());
  EXPECT_EQ(rc.rhs2, 1.5);
  EXPECT_EQ(rc.c2, Oracle()["rate.c2_zw1.5_inf2"].get<bool>());
}

TEST(RateConstraints, NoAnnealingReducesToSpikingCondition) {
  const AnnealSchedule s = AnnealSchedule::Fixed(1.2);
  const double z[] = {1.0, 1.0};
  const double w[] = {0.7, 0.6};
  const double g[] = {0.0, 0.0};
  const RateConstraints rc = CheckRateConstraints(s, z, w, g, 0.5);
  EXPECT_EQ(rc.lhs1, 1.2);
  EXPECT_TRUE(rc.c1);
}

}  // namespace
}  // namespace tha
