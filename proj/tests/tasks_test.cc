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

#include "tha/tasks.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "oracle.h"
#include "tha/errors.h"

namespace tha {
namespace {

namespace fs = std::filesystem;
using testing::OracleValue;

TEST(PoissonEncode, BinaryWithConvergingRates) {
  Rng rng(1);
  const std::vector<double> rates{0.0, 0.05, 0.3, 0.5, 1.0};
  const Matrix z = PoissonEncode(rates, 20000, rng);
  ASSERT_EQ(z.rows(), 20000u);
  ASSERT_EQ(z.cols(), rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    double count = 0.0;
    for (std::size_t t = 0; t < z.rows(); ++t) {
      const double v = z(t, i);
      ASSERT_TRUE(v == 0.0 || v == 1.0);
      count += v;
    }
    const double p = rates[i];
    const double sigma = std::sqrt(p * (1 - p) / 20000.0);
    EXPECT_NEAR(count / 20000.0, p, 4 * sigma + 1e-12) << "rate " << p;
  }
  EXPECT_THROW(PoissonEncode(std::vector<double>{1.5}, 3, rng), ContractError);
}

TEST(PoissonEncode, SeedDeterminesTrain) {
  Rng a(42), b(42);
  const std::vector<double> rates(30, 0.2);
  EXPECT_EQ(PoissonEncode(rates, 50, a), PoissonEncode(rates, 50, b));
}

TEST(TriangularTarget, Examples) {
  TriangularTargetSpec spec;
  spec.theta_ref = 50.0;
  const Matrix y = TriangularTarget(spec);
  ASSERT_EQ(y.rows(), 100u);
  EXPECT_EQ(y(75, 0), OracleValue("target.t75_theta50"));
  EXPECT_EQ(y(0, 0), OracleValue("target.t0"));
  for (std::size_t t = 76; t < 100; ++t) EXPECT_EQ(y(t, 0), 0.0);
  double peak = 0.0;
  for (std::size_t t = 0; t <= 75; ++t) {
    if (t > 0) EXPECT_GT(y(t, 0), y(t - 1, 0));
    peak = std::max(peak, y(t, 0));
  }
  EXPECT_EQ(peak, y(75, 0));
  EXPECT_NEAR(peak, 1.1 * 50.0, 1e-12);

  spec.t_spike = 0;
  EXPECT_THROW(TriangularTarget(spec), ContractError);
  spec.t_spike = 100;
  EXPECT_THROW(TriangularTarget(spec), ContractError);
}

TEST(StaticCurrent, RepeatsImage) {
  const std::vector<double> img{0.0, 0.25, 1.0};
  const Matrix m = StaticCurrent(img, 4);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(m(t, i), img[i]);
}

class IdxFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tha_idx_" + std::to_string(::testing::UnitTest::GetInstance()
                                            ->random_seed()) +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    set_.rows = 2;
    set_.cols = 3;
    set_.images = Matrix(4, 6);
    for (std::size_t i = 0; i < set_.images.size(); ++i)
      set_.images.flat()[i] = static_cast<double>((i * 37) % 256) / 255.0;
    set_.labels = {3, 1, 4, 1};
    WriteMnistIdx(set_, img(), lab());
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string img() const { return (dir_ / "img.idx").string(); }
  std::string lab() const { return (dir_ / "lab.idx").string(); }

  void Corrupt(const std::string& path, std::size_t offset, char byte) {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(offset));
    f.put(byte);
  }
  void Truncate(const std::string& path, std::size_t size) {
    fs::resize_file(path, size);
  }

  fs::path dir_;
  MnistSet set_;
};

TEST_F(IdxFiles, RoundTrip) {
  const MnistSet back = LoadMnistIdx(img(), lab(), std::nullopt, "train");
  EXPECT_EQ(back.rows, 2u);
  EXPECT_EQ(back.cols, 3u);
  EXPECT_EQ(back.images, set_.images);
  EXPECT_EQ(back.labels, set_.labels);
  EXPECT_EQ(back.split, "train");
  const MnistSet two = LoadMnistIdx(img(), lab(), 2);
  EXPECT_EQ(two.size(), 2u);
  EXPECT_EQ(two.labels[1], 1);
}

TEST_F(IdxFiles, BadMagic) {
  Corrupt(img(), 3, 0x04);
  try {
    LoadMnistIdx(img(), lab());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.kind(), DataError::Kind::kBadMagic);
    EXPECT_NE(std::string(e.what()).find("0x00000804"), std::string::npos);
  }
}

TEST_F(IdxFiles, CountMismatch) {
  Corrupt(lab(), 7, 0x05);
  try {
    LoadMnistIdx(img(), lab());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.kind(), DataError::Kind::kCountMismatch);
  }
}

TEST_F(IdxFiles, Truncated) {
  Truncate(img(), 16 + 6 * 3);
  try {
    LoadMnistIdx(img(), lab());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.kind(), DataError::Kind::kTruncated);
  }
}

TEST_F(IdxFiles, MissingFile) {
  try {
    LoadMnistIdx((dir_ / "nope").string(), lab());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.kind(), DataError::Kind::kIo);
  }
}

TEST(SparseTask, ShapesRatesAndDeterminism) {
  SparseTaskSpec spec;
  spec.train = 20;
  spec.test = 10;
  const SparseTask a = MakeSparseTask(spec, 7);
  const SparseTask b = MakeSparseTask(spec, 7);
  ASSERT_EQ(a.train.size(), 20u);
  ASSERT_EQ(a.test.size(), 10u);
  for (std::size_t s = 0; s < a.train.size(); ++s) {
    EXPECT_EQ(a.train[s].input, b.train[s].input);
    EXPECT_EQ(a.train[s].label, static_cast<int>(s % spec.classes));
    EXPECT_EQ(a.train[s].input.rows(), spec.steps);
    EXPECT_EQ(a.train[s].input.cols(), spec.inputs);
  }
  for (const auto& rates : a.class_rates) {
    std::size_t hot = 0;
    for (double r : rates) {
      EXPECT_LE(r, 0.05);
      hot += r == spec.hot_rate;
    }
    EXPECT_EQ(hot, spec.hot_inputs);
  }
  EXPECT_NE(MakeSparseTask(spec, 8).train[0].input, a.train[0].input);
}

}  // namespace
}  // namespace tha
