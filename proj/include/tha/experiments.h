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

#ifndef THA_EXPERIMENTS_H_
#define THA_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tha/config.h"
#include "tha/diagnostics.h"
#include "tha/network.h"
#include "tha/tasks.h"

namespace tha {

// Independent random streams derived from the run seed.
inline constexpr std::uint64_t kStreamInit = 1;
inline constexpr std::uint64_t kStreamInput = 2;
inline constexpr std::uint64_t kStreamShuffle = 3;

// Dense network with U(+-sqrt(1/fan_in)) latents and biases, thresholds and
// surrogate centres set by the config mode.
Network BuildNetwork(const ExperimentConfig& cfg, Rng& rng);

struct TemporalOutcome {
  std::vector<double> input_rates;
  Matrix input;  // the fixed training input, T x n_in
  // Output spike steps of every iteration's forward pass.
  std::vector<std::vector<std::size_t>> output_spikes;
  // First iteration whose output fired exactly once within
  // t_spike +- spike_window.
  std::optional<std::uint64_t> first_hit;
  std::uint64_t output_spike_total = 0;
};

struct ClassifyOutcome {
  double test_accuracy = 0.0;
  std::size_t ties = 0;  // predictions decided by the lowest-index rule
  std::vector<int> predictions;
};

struct RunOutput {
  RunRecord record;
  Network net;
  TemporalOutcome temporal;  // temporal runs
  ClassifyOutcome classify;  // mnist and sparse runs
};

// Per-iteration callback for progress reporting.
using ProgressFn = std::function<void(const IterationRow&)>;

RunOutput RunTemporal(const ExperimentConfig& cfg,
                      const ProgressFn& progress = {});
// Loads the IDX files named by cfg.mnist_dir.
RunOutput RunMnist(const ExperimentConfig& cfg, const ProgressFn& progress = {});
RunOutput RunMnist(const ExperimentConfig& cfg, const MnistSet& train,
                   const MnistSet& test, const ProgressFn& progress = {});
RunOutput RunSparse(const ExperimentConfig& cfg,
                    const ProgressFn& progress = {});
RunOutput RunExperiment(const ExperimentConfig& cfg,
                        const ProgressFn& progress = {});

// Class = highest output spike count; ties go to the lowest index and set
// `tie`.
int PredictClass(const Matrix& output_spikes, bool* tie = nullptr);

// Evaluation-mode accuracy over `count` inputs.
ClassifyOutcome EvaluateClassifier(const Network& net, std::size_t count,
                                   const InputFn& input,
                                   std::span<const int> labels,
                                   std::size_t threads = 1);

// Evaluation-mode census over the experiment's evaluation set.
ActivityCensus CensusForConfig(const Network& net, const ExperimentConfig& cfg);

}  // namespace tha

#endif  // THA_EXPERIMENTS_H_
