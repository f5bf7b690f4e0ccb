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

#ifndef THA_TASKS_H_
#define THA_TASKS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tha/matrix.h"
#include "tha/rng.h"

namespace tha {

// Bernoulli spike trains, one independent draw per (step, input) from `rng`,
// iterated step-major. The result is T x inputs: row t holds the spikes
// emitted at step t. Throws ContractError for rates outside [0, 1].
Matrix PoissonEncode(std::span<const double> rates, std::size_t steps, Rng& rng);

struct TriangularTargetSpec {
  std::size_t steps = 100;
  std::size_t t_spike = 75;
  double peak_scale = 1.1;
  double theta_ref = 1.0;
};

// Membrane target: peak_scale * theta_ref * t / t_spike for t <= t_spike and
// zero afterwards. Returned as a T x 1 trace. Requires 0 < t_spike < T.
Matrix TriangularTarget(const TriangularTargetSpec& spec);

// The same current vector at every one of `steps` steps (no encoding).
Matrix StaticCurrent(std::span<const double> image, std::size_t steps);

struct MnistSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Matrix images;  // count x (rows*cols), values byte / 255
  std::vector<std::uint8_t> labels;
  std::string split;

  std::size_t size() const { return labels.size(); }
};

// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
// `limit` keeps the first N samples in file order. Each failure mode raises a
// distinct DataError kind; nothing is returned on failure.
MnistSet LoadMnistIdx(const std::string& images_path,
                      const std::string& labels_path,
                      std::optional<std::size_t> limit = std::nullopt,
                      std::string split = {});

// Writes raw IDX files. Pixel values are rounded back to bytes.
void WriteMnistIdx(const MnistSet& set, const std::string& images_path,
                   const std::string& labels_path);

// One labelled example for the training loop.
struct Sample {
  Matrix input;  // T x n_in
  int label = -1;
};

// Synthetic sparse-rate classification problem: every class owns a random
// subset of "hot" inputs firing at `hot_rate`; all other inputs fire at
// `base_rate`. Each sample is a fresh Poisson draw from its class's rates.
struct SparseTaskSpec {
  std::size_t inputs = 200;
  std::size_t classes = 5;
  std::size_t hot_inputs = 40;
  double hot_rate = 0.05;
  double base_rate = 0.005;
  std::size_t steps = 100;
  std::size_t train = 500;
  std::size_t test = 250;
};

struct SparseTask {
  std::vector<std::vector<double>> class_rates;
  std::vector<Sample> train;
  std::vector<Sample> test;
};

SparseTask MakeSparseTask(const SparseTaskSpec& spec, std::uint64_t seed);

}  // namespace tha

#endif  // THA_TASKS_H_
