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

#ifndef THA_CONFIG_H_
#define THA_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tha/loss.h"
#include "tha/optim.h"
#include "tha/tasks.h"
#include "tha/train.h"

namespace tha {

// Flat key=value view of a configuration. Layer keys are dotted and
// 1-indexed over weight layers: layer.2.theta_inf=50.
using ConfigMap = std::map<std::string, std::string>;

enum class Experiment { kTemporal, kMnist, kSparse };
enum class Mode { kFullPrecision, kBsnnFixed, kBsnnAnneal };

struct LayerConfig {
  double beta = 0.9;
  double dropout = 0.0;
  double k = 5.0;
  double theta = 1.0;      // fixed modes
  double theta0 = 1.0;     // bsnn_anneal
  double theta_inf = 1.0;
  double alpha = 0.0;

  friend bool operator==(const LayerConfig&, const LayerConfig&) = default;
};

struct ExperimentConfig {
  std::string preset;
  Experiment experiment = Experiment::kTemporal;
  Mode mode = Mode::kBsnnAnneal;
  std::vector<std::size_t> sizes{100, 1000, 1};
  std::vector<LayerConfig> layers;
  std::size_t steps = 100;
  std::uint64_t iterations = 2000;  // temporal
  std::uint64_t epochs = 1;         // mnist, sparse
  std::size_t batch_size = 1;
  std::uint64_t seed = 0;

  OptimizerConfig optimizer;
  std::uint64_t lr_period = 0;
  bool grad_clip = false;
  double grad_clip_norm = 1.0;
  bool weight_clip = false;

  std::size_t threads = 1;
  BoundMode bound_mode = BoundMode::kStrict;
  bool record_wall_time = false;
  SpikeCountTargets count_targets;
  double dead_epsilon = 0.0;
  std::uint64_t census_every = 0;  // iterations; 0 = final census only

  // Temporal task.
  std::size_t t_spike = 75;
  double peak_scale = 1.1;
  ThetaRef theta_ref = ThetaRef::kCurrent;
  double rate_max = 0.5;
  std::size_t spike_window = 3;
  std::vector<std::uint64_t> log_iterations{0, 100, 200, 400};

  // MNIST.
  std::string mnist_dir = "data/mnist";
  std::optional<std::size_t> limit_train;
  std::optional<std::size_t> limit_test;

  // Sparse synthetic task (inputs/classes come from `sizes`).
  SparseTaskSpec sparse;

  std::string out_dir = "runs";
};

// Parses "key = value" lines; '#' starts a comment. Duplicate keys and
// malformed lines are ConfigErrors naming the line.
ConfigMap ParseConfigText(const std::string& text);
// Reads a key=value file, or the "config" object of a JSON run sidecar.
ConfigMap LoadConfigFile(const std::string& path);

// Built-in presets as key=value maps.
const std::map<std::string, ConfigMap>& Presets();
ConfigMap PresetMap(const std::string& name);  // ConfigError if unknown

// `over` wins over `base`.
ConfigMap Merge(const ConfigMap& base, const ConfigMap& over);

// Strict conversion: unknown keys, type mismatches and constraint
// violations are ConfigErrors naming the offending key(s).
ExperimentConfig FromMap(const ConfigMap& map);
// Every resolved value, suitable for FromMap (round-trips exactly).
ConfigMap ToMap(const ExperimentConfig& cfg);

std::string ExperimentName(Experiment e);
std::string ModeName(Mode m);

}  // namespace tha

#endif  // THA_CONFIG_H_
