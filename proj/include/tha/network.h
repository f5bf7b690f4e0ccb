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

#ifndef THA_NETWORK_H_
#define THA_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tha/anneal.h"
#include "tha/binarize.h"
#include "tha/matrix.h"
#include "tha/neuron.h"

namespace tha {

enum class Precision { kFull, kBinarized };

// One dense LIF layer: weights (rows = neurons, cols = fan-in, optional
// bias), leak, threshold schedule, surrogate and dropout on its spikes.
struct Layer {
  LatentWeightMatrix weights;
  double beta = 0.9;
  AnnealSchedule threshold;
  SurrogateConfig surrogate;
  double dropout = 0.0;

  std::size_t size() const { return weights.rows(); }
  std::size_t fan_in() const { return weights.cols(); }
};

class Network {
 public:
  Network() = default;
  // Throws ContractError if adjacent layer sizes disagree.
  Network(Precision precision, std::vector<Layer> layers);

  Precision precision() const { return precision_; }
  std::size_t num_layers() const { return layers_.size(); }
  std::size_t input_size() const { return layers_.front().fan_in(); }
  std::size_t output_size() const { return layers_.back().size(); }
  Layer& layer(std::size_t i) { return layers_[i]; }
  const Layer& layer(std::size_t i) const { return layers_[i]; }
  std::span<Layer> layers() { return layers_; }
  std::span<const Layer> layers() const { return layers_; }

  // Weights as seen by the forward pass: the sign view for binarized
  // networks, the latents otherwise.
  Matrix EffectiveWeights(std::size_t i) const;
  std::vector<Matrix> AllEffectiveWeights() const;

  // Optimizer parameters in a fixed order: W1, b1, W2, b2, ... (biases only
  // for layers that have them).
  std::vector<std::span<double>> Parameters();

  void ClipLatent();

  // One threshold-annealing step on every layer. Returns the number of
  // schedules advanced, which equals num_layers().
  std::size_t AnnealStep();

 private:
  Precision precision_ = Precision::kBinarized;
  std::vector<Layer> layers_;
};

// Spike nonlinearity fed to the next layer. kSmooth replaces the Heaviside
// output by SmoothSpike (resets still use the Heaviside spike); it exists so
// the reverse pass can be checked against finite differences.
enum class SpikeFn { kHeaviside, kSmooth };

// kTraining uses the current annealed threshold; kEvaluation uses the
// test-time threshold (theta_inf once within 0.1% of it).
enum class ThresholdPolicy { kTraining, kEvaluation };

struct ForwardOptions {
  bool train = false;  // enables dropout
  SpikeFn spike_fn = SpikeFn::kHeaviside;
  ThresholdPolicy threshold = ThresholdPolicy::kTraining;
  std::uint64_t dropout_seed = 0;
};

struct LayerTape {
  Matrix input;    // T x fan_in, what the layer received
  Matrix u;        // T x n, membrane before the reset it triggers
  Matrix spikes;   // T x n, Heaviside spikes
  Matrix out;      // T x n, spike nonlinearity before dropout
  std::vector<double> mask;  // n, inverted-dropout scale; empty = identity
  std::vector<double> theta_per_step;  // T, threshold read at each step
  double theta = 0.0;
};

struct Tape {
  std::size_t steps = 0;
  std::vector<LayerTape> layers;

  const Matrix& output_u() const { return layers.back().u; }
  const Matrix& output_spikes() const { return layers.back().spikes; }
};

// Runs T = input.rows() steps through every layer. Throws ContractError on a
// fan-in mismatch and NumericError (with layer and step) on non-finite state.
Tape Forward(const Network& net, const Matrix& input,
             const ForwardOptions& opts = {});
Tape Forward(const Network& net, std::span<const Matrix> effective,
             const Matrix& input, const ForwardOptions& opts = {});

// Loss gradients with respect to the recorded output layer: d_u (T x n_out)
// for membrane losses, d_out (T x n_out) for spike losses. Either may be
// empty.
struct LossGrad {
  Matrix d_u;
  Matrix d_out;
};

struct LayerGrad {
  Matrix effective;  // dL/d(forward weights)
  Matrix latent;     // routed through the clipped STE when binarized
  std::vector<double> bias;
};

struct Gradients {
  std::vector<LayerGrad> layers;

  // Same order as Network::Parameters().
  std::vector<std::span<double>> Flat();
  std::vector<std::span<const double>> Flat() const;
};

// Reverse-mode accumulation through the unrolled network. The membrane
// recurrence contributes beta per step, spike nodes use SurrogateGrad at the
// recorded membrane with the fixed clamp theta0 (never the current
// threshold), and the reset path is treated as a constant. Weights must be
// the ones the tape was recorded with.
Gradients Backward(const Network& net, const Tape& tape, const LossGrad& grad);
Gradients Backward(const Network& net, std::span<const Matrix> effective,
                   const Tape& tape, const LossGrad& grad);

// Zero-initialised gradient buffers shaped like `net`.
Gradients ZeroGradients(const Network& net);

}  // namespace tha

#endif  // THA_NETWORK_H_
