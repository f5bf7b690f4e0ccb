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

#ifndef THA_TRAIN_H_
#define THA_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tha/anneal.h"
#include "tha/loss.h"
#include "tha/network.h"
#include "tha/optim.h"
#include "tha/tasks.h"

namespace tha {

struct LossEval {
  double loss = 0.0;
  LossGrad grad;
};

// Maps the recorded forward pass of one sample to a loss and its gradient
// with respect to the output layer.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual LossEval Evaluate(const Network& net, const Tape& tape,
                            const Sample& sample) const = 0;
};

// Which threshold the triangular target peaks against.
enum class ThetaRef { kCurrent, kFinal };

// Membrane MSE against a triangular target rebuilt from the output layer's
// threshold every time it is evaluated.
class MembraneTargetObjective : public Objective {
 public:
  MembraneTargetObjective(std::size_t t_spike, double peak_scale, ThetaRef ref)
      : t_spike_(t_spike), peak_scale_(peak_scale), ref_(ref) {}

  Matrix Target(const Network& net, std::size_t steps) const;
  LossEval Evaluate(const Network& net, const Tape& tape,
                    const Sample& sample) const override;

 private:
  std::size_t t_spike_;
  double peak_scale_;
  ThetaRef ref_;
};

class SpikeCountObjective : public Objective {
 public:
  explicit SpikeCountObjective(SpikeCountTargets targets = {})
      : targets_(targets) {}
  LossEval Evaluate(const Network& net, const Tape& tape,
                    const Sample& sample) const override;

 private:
  SpikeCountTargets targets_;
};

// kStrict monitors every neuron that spiked in the previous pass (at its
// first spike); kLenient only neurons that emitted exactly one spike.
enum class BoundMode { kStrict, kLenient };

struct TrainOptions {
  std::uint64_t lr_period = 0;  // cosine restarts, 0 = constant rate
  bool grad_clip = false;
  double grad_clip_norm = 1.0;
  std::size_t threads = 1;
  std::uint64_t seed = 0;  // dropout streams
  BoundMode bound_mode = BoundMode::kStrict;
  bool record_wall_time = false;
};

struct IterationRow {
  std::uint64_t iteration = 0;
  std::uint64_t epoch = 0;
  double lr = 0.0;
  double loss = 0.0;                // batch mean
  std::vector<double> theta;        // per layer, as used by this forward pass
  std::vector<double> spike_rate;   // spikes per neuron per step
  std::vector<std::optional<double>> dead_fraction;  // filled periodically
  std::uint64_t bound_violations = 0;             // all layers
  std::vector<std::uint64_t> layer_violations;    // per layer
  double wall_ms = 0.0;

  friend bool operator==(const IterationRow&, const IterationRow&) = default;
};

// Drives the training iteration:
//   forward -> loss -> backward -> clip gradients -> optimizer step
//   -> clip latents -> anneal every layer once.
// Per-sample passes of a batch may run on several threads; their gradients
// are summed in sample order, so results do not depend on the thread count.
class Trainer {
 public:
  Trainer(Network& net, const Objective& objective, OptimizerConfig optimizer,
          TrainOptions opts);

  IterationRow Iterate(std::span<const Sample> batch, std::uint64_t epoch = 0);

  std::uint64_t iteration() const { return iteration_; }
  std::uint64_t anneal_calls() const { return anneal_calls_; }
  const Optimizer& optimizer() const { return optimizer_; }
  // Forward record of batch[0] from the last iteration.
  const Tape& first_tape() const { return first_tape_; }
  // Batch-mean gradients of the last iteration, after clipping.
  const Gradients& last_gradients() const { return last_grads_; }
  const std::vector<BoundReport>& last_bound_reports() const {
    return last_reports_;
  }

 private:
  struct SampleResult {
    double loss = 0.0;
    Gradients grads;
    std::vector<double> spikes;  // per layer totals
  };

  SampleResult RunSample(std::span<const Matrix> effective,
                         const Sample& sample, std::size_t index,
                         Tape* keep) const;
  std::vector<std::uint64_t> MonitorBounds(const Tape& tape);

  Network& net_;
  const Objective& objective_;
  Optimizer optimizer_;
  TrainOptions opts_;
  std::uint64_t iteration_ = 0;
  std::uint64_t anneal_calls_ = 0;
  Tape first_tape_;
  Gradients last_grads_;
  std::vector<BoundReport> last_reports_;
  // Previous pass of batch[0]: first spike step per neuron (-1 = silent),
  // spike counts and thresholds.
  std::vector<std::vector<long>> prev_first_spike_;
  std::vector<std::vector<int>> prev_counts_;
  std::vector<double> prev_theta_;
};

// Samples of `items` in [begin, end) (used to batch a dataset without copies).
template <typename T>
std::span<const T> Slice(const std::vector<T>& items, std::size_t begin,
                         std::size_t end) {
  return std::span<const T>(items).subspan(begin, end - begin);
}

}  // namespace tha

#endif  // THA_TRAIN_H_
