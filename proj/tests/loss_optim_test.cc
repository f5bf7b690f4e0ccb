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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracle.h"
#include "tha/errors.h"
#include "tha/loss.h"
#include "tha/optim.h"
#include "tha/rng.h"

namespace tha {
namespace {

using testing::Oracle;
using testing::OracleValue;

Matrix Column(std::initializer_list<double> v) {
  Matrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.values().begin());
  return m;
}

Matrix CountTrains(std::size_t steps, std::initializer_list<int> counts) {
  Matrix z(steps, counts.size());
  std::size_t j = 0;
  for (int c : counts) {
    for (int t = 0; t < c; ++t) z(static_cast<std::size_t>(t), j) = 1.0;
    ++j;
  }
  return z;
}

TEST(MembraneMse, Examples) {
  const LossValue v = MembraneMseLoss(Column({0, 0}), Column({1, 0}));
  EXPECT_EQ(v.loss, OracleValue("mse.y10_u00"));
  const auto grad = Oracle()["mse.grad_y10_u00"];
  EXPECT_EQ(v.grad(0, 0), grad[0].get<double>());
  EXPECT_EQ(v.grad(1, 0), grad[1].get<double>());
  EXPECT_EQ(MembraneMseLoss(Column({3, -1}), Column({3, -1})).loss, 0.0);
  EXPECT_THROW(MembraneMseLoss(Column({1}), Column({1, 2})), ContractError);
}

TEST(MembraneMse, QuadraticScaling) {
  Rng rng(1);
  Matrix u(20, 2), y(20, 2), y2(20, 2);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u.flat()[i] = rng.Uniform(-3, 3);
    y.flat()[i] = rng.Uniform(-3, 3);
    y2.flat()[i] = u.flat()[i] + 2.0 * (y.flat()[i] - u.flat()[i]);
  }
  EXPECT_NEAR(MembraneMseLoss(u, y2).loss, 4.0 * MembraneMseLoss(u, y).loss,
              1e-9);
}

TEST(SpikeCountMse, Examples) {
  EXPECT_EQ(SpikeCountMseLoss(CountTrains(10, {8, 2}), 0).loss,
            OracleValue("count.t10_8_2"));
  EXPECT_EQ(SpikeCountMseLoss(CountTrains(10, {2, 8}), 0).loss,
            OracleValue("count.t10_2_8"));
  EXPECT_EQ(SpikeCountMseLoss(Matrix(100, 10), 3).loss,
            OracleValue("count.t100_silent10"));
  EXPECT_EQ(SpikeCountMseLoss(
                CountTrains(100, {80, 20, 20, 20, 20, 20, 20, 20, 20, 20}), 0)
                .loss,
            OracleValue("count.t100_exact"));
  EXPECT_THROW(SpikeCountMseLoss(Matrix(10, 2), 2), ContractError);
}

TEST(SpikeCountMse, GradientIsConstantOverTime) {
  const LossValue v = SpikeCountMseLoss(CountTrains(10, {2, 8}), 0);
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_EQ(v.grad(t, 0), -2.0 * (8 - 2));
    EXPECT_EQ(v.grad(t, 1), -2.0 * (2 - 8));
  }
}

TEST(SpikeCountMse, PerStepForm) {
  SpikeCountTargets targets;
  targets.form = CountLossForm::kPerStep;
  // Correct class always on, other always off: (0.8-1)^2 and (0.2-0)^2 per step.
  Matrix z(5, 2);
  for (std::size_t t = 0; t < 5; ++t) z(t, 0) = 1.0;
  const LossValue v = SpikeCountMseLoss(z, 0, targets);
  EXPECT_NEAR(v.loss, 5 * (0.04 + 0.04), 1e-12);
  EXPECT_NEAR(v.grad(0, 0), -2.0 * (0.8 - 1.0), 1e-12);
  EXPECT_NEAR(v.grad(0, 1), -2.0 * 0.2, 1e-12);
}

struct Param {
  std::vector<double> p;
  std::vector<double> g;
};

void Step(Optimizer& opt, Param& x, double lr) {
  const std::span<double> ps[] = {x.p};
  const std::span<const double> gs[] = {x.g};
  opt.Step(ps, gs, lr);
}

TEST(SgdMomentum, Examples) {
  Optimizer opt({OptimizerKind::kSgdMomentum, 1e-3, 0.9});
  Param x{{0.0}, {1.0}};
  Step(opt, x, 1e-3);
  Step(opt, x, 1e-3);
  EXPECT_NEAR(x.p[0], OracleValue("sgd.two_steps"), 1e-15);

  Optimizer plain({OptimizerKind::kSgdMomentum, 0.1, 0.0});
  Param y{{1.0, -2.0}, {0.5, -1.0}};
  Step(plain, y, 0.1);
  EXPECT_DOUBLE_EQ(y.p[0], 0.95);
  EXPECT_DOUBLE_EQ(y.p[1], -1.9);
}

TEST(SgdMomentum, ZeroGradientVelocityDecays) {
  Optimizer opt({OptimizerKind::kSgdMomentum, 1e-2, 0.9});
  Param x{{0.0}, {1.0}};
  Step(opt, x, 1e-2);
  x.g[0] = 0.0;
  double last = x.p[0];
  double last_move = INFINITY;
  for (int i = 0; i < 400; ++i) {
    Step(opt, x, 1e-2);
    const double move = std::fabs(x.p[0] - last);
    EXPECT_LE(move, last_move);
    last_move = move;
    last = x.p[0];
  }
  EXPECT_LT(last_move, 1e-18);
}

TEST(Adam, FirstStep) {
  Optimizer opt({OptimizerKind::kAdam, 1e-3});
  Param x{{0.0, 5.0}, {0.37, 0.0}};
  Step(opt, x, 1e-3);
  EXPECT_NEAR(x.p[0], OracleValue("adam.step1_g0.37"), 1e-15);
  EXPECT_NEAR(x.p[0], OracleValue("adam.step1_expected_approx"), 1e-10);
  EXPECT_EQ(x.p[1], 5.0);

  Optimizer scaled({OptimizerKind::kAdam, 1e-3});
  Param z{{0.0}, {3.7}};
  Step(scaled, z, 1e-3);
  EXPECT_NEAR(z.p[0], x.p[0], 1e-10);
}

TEST(CosineLr, Examples) {
  EXPECT_EQ(CosineLr(0.01, 0, 40), OracleValue("cosine.start"));
  EXPECT_NEAR(CosineLr(0.01, 20, 40), OracleValue("cosine.half"), 1e-17);
  EXPECT_NEAR(CosineLr(0.01, 39, 40), OracleValue("cosine.end"), 1e-17);
  EXPECT_EQ(CosineLr(0.01, 40, 40), OracleValue("cosine.restart"));
  EXPECT_EQ(CosineLr(0.01, 123, 0), 0.01);
}

TEST(ClipGradients, Examples) {
  std::vector<double> a{0.3, 0.0}, b{0.4};
  std::span<double> gs[] = {a, b};
  EXPECT_NEAR(ClipGradients(gs, 1.0), 0.5, 1e-15);
  EXPECT_EQ(a[0], 0.3);

  std::vector<double> c{4.0, 0.0}, d{0.0};
  std::span<double> big[] = {c, d};
  EXPECT_EQ(ClipGradients(big, 1.0), 4.0);
  EXPECT_EQ(c[0], 4.0 * OracleValue("clip.scale_norm4"));

  std::vector<double> zero(3, 0.0);
  std::span<double> zs[] = {zero};
  EXPECT_EQ(ClipGradients(zs, 1.0), 0.0);
  for (double v : zero) EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace tha
