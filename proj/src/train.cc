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

#include "tha/train.h"

#include <chrono>
#include <thread>

#include "tha/errors.h"
#include "tha/rng.h"

namespace tha {

Matrix MembraneTargetObjective::Target(const Network& net,
                                       std::size_t steps) const {
  const AnnealSchedule& s = net.layer(net.num_layers() - 1).threshold;
  TriangularTargetSpec spec;
  spec.steps = steps;
  spec.t_spike = t_spike_;
  spec.peak_scale = peak_scale_;
  spec.theta_ref = ref_ == ThetaRef::kCurrent ? s.theta() : s.theta_inf();
  return TriangularTarget(spec);
}

LossEval MembraneTargetObjective::Evaluate(const Network& net, const Tape& tape,
                                           const Sample&) const {
  THA_REQUIRE(net.output_size() == 1,
              "membrane target objective expects a single output neuron");
  LossValue v = MembraneMseLoss(tape.output_u(), Target(net, tape.steps));
  LossEval out;
  out.loss = v.loss;
  out.grad.d_u = std::move(v.grad);
  return out;
}

LossEval SpikeCountObjective::Evaluate(const Network&, const Tape& tape,
                                       const Sample& sample) const {
  THA_REQUIRE(sample.label >= 0, "spike count objective needs a label");
  LossValue v = SpikeCountMseLoss(tape.output_spikes(),
                                  static_cast<std::size_t>(sample.label),
                                  targets_);
  LossEval out;
  out.loss = v.loss;
  out.grad.d_out = std::move(v.grad);
  return out;
}

Trainer::Trainer(Network& net, const Objective& objective,
                 OptimizerConfig optimizer, TrainOptions opts)
    : net_(net), objective_(objective), optimizer_(optimizer), opts_(opts) {
  THA_REQUIRE(opts_.threads >= 1, "trainer needs at least one thread");
}

Trainer::SampleResult Trainer::RunSample(std::span<const Matrix> effective,
                                         const Sample& sample,
                                         std::size_t index, Tape* keep) const {
  ForwardOptions fo;
  fo.train = true;
  fo.dropout_seed = DeriveSeed(opts_.seed, iteration_, index);
  Tape tape = Forward(net_, effective, sample.input, fo);
  LossEval le = objective_.Evaluate(net_, tape, sample);
  SampleResult r;
  r.loss = le.loss;
  r.grads = Backward(net_, effective, tape, le.grad);
  r.spikes.resize(tape.layers.size());
  for (std::size_t l = 0; l < tape.layers.size(); ++l) {
    double total = 0.0;
    for (double z : tape.layers[l].spikes.flat()) total += z;
    r.spikes[l] = total;
  }
  if (keep) *keep = std::move(tape);
  return r;
}

std::vector<std::uint64_t> Trainer::MonitorBounds(const Tape& tape) {
  const std::size_t num_layers = net_.num_layers();
  last_reports_.clear();
  std::vector<std::uint64_t> violations(num_layers, 0);
  if (!prev_first_spike_.empty()) {
    for (std::size_t l = 0; l < num_layers; ++l) {
      const LayerTape& lt = tape.layers[l];
      std::vector<std::size_t> ids;
      std::vector<double> u_next;
      for (std::size_t j = 0; j < prev_first_spike_[l].size(); ++j) {
        const long t = prev_first_spike_[l][j];
        if (t < 0) continue;
        if (opts_.bound_mode == BoundMode::kLenient && prev_counts_[l][j] != 1)
          continue;
        ids.push_back(j);
        u_next.push_back(lt.u(static_cast<std::size_t>(t), j));
      }
      BoundReport r =
          CheckUpdateBound(lt.theta - prev_theta_[l], u_next, prev_theta_[l]);
      r.layer = l;
      r.iteration = iteration_;
      r.neurons = std::move(ids);
      violations[l] = r.violation_count();
      last_reports_.push_back(std::move(r));
    }
  }
  prev_first_spike_.assign(num_layers, {});
  prev_counts_.assign(num_layers, {});
  prev_theta_.assign(num_layers, 0.0);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const LayerTape& lt = tape.layers[l];
    const std::size_t n = lt.spikes.cols();
    prev_first_spike_[l].assign(n, -1);
    prev_counts_[l].assign(n, 0);
    prev_theta_[l] = lt.theta;
    for (std::size_t t = 0; t < tape.steps; ++t) {
      for (std::size_t j = 0; j < n; ++j) {
        if (lt.spikes(t, j) == 0.0) continue;
        if (prev_first_spike_[l][j] < 0)
          prev_first_spike_[l][j] = static_cast<long>(t);
        ++prev_counts_[l][j];
      }
    }
  }
  return violations;
}

IterationRow Trainer::Iterate(std::span<const Sample> batch,
                              std::uint64_t epoch) {
  THA_REQUIRE(!batch.empty(), "train iteration needs a non-empty batch");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t num_layers = net_.num_layers();

  IterationRow row;
  row.iteration = iteration_;
  row.epoch = epoch;
  row.lr = CosineLr(optimizer_.config().lr, iteration_, opts_.lr_period);
  row.theta.resize(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l)
    row.theta[l] = net_.layer(l).threshold.theta();

  const std::vector<Matrix> effective = net_.AllEffectiveWeights();
  Gradients total = ZeroGradients(net_);
  auto total_flat = total.Flat();
  std::vector<double> spikes(num_layers, 0.0);
  double loss = 0.0;

  // Waves of `threads` samples; each wave is reduced in sample order.
  const std::size_t width = opts_.threads;
  std::vector<SampleResult> wave(width);
  for (std::size_t begin = 0; begin < batch.size(); begin += width) {
    const std::size_t count = std::min(width, batch.size() - begin);
    if (count == 1) {
      wave[0] = RunSample(effective, batch[begin], begin,
                          begin == 0 ? &first_tape_ : nullptr);
    } else {
      std::vector<std::jthread> workers;
      for (std::size_t k = 1; k < count; ++k) {
        workers.emplace_back([&, k] {
          wave[k] = RunSample(effective, batch[begin + k], begin + k, nullptr);
        });
      }
      wave[0] = RunSample(effective, batch[begin], begin,
                          begin == 0 ? &first_tape_ : nullptr);
      workers.clear();  // joins
    }
    for (std::size_t k = 0; k < count; ++k) {
      loss += wave[k].loss;
      const auto flat = wave[k].grads.Flat();
      for (std::size_t p = 0; p < flat.size(); ++p)
        for (std::size_t i = 0; i < flat[p].size(); ++i)
          total_flat[p][i] += flat[p][i];
      for (std::size_t l = 0; l < num_layers; ++l)
        spikes[l] += wave[k].spikes[l];
    }
  }

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  row.loss = loss * inv_batch;
  for (auto& g : total_flat)
    for (double& v : g) v *= inv_batch;
  row.spike_rate.resize(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const double denom = static_cast<double>(net_.layer(l).size()) *
                         static_cast<double>(first_tape_.steps) *
                         static_cast<double>(batch.size());
    row.spike_rate[l] = spikes[l] / denom;
  }
  row.dead_fraction.assign(num_layers, std::nullopt);
  row.layer_violations = MonitorBounds(first_tape_);
  for (std::uint64_t v : row.layer_violations) row.bound_violations += v;

  if (opts_.grad_clip) ClipGradients(total_flat, opts_.grad_clip_norm);
  auto params = net_.Parameters();
  std::vector<std::span<const double>> grads(total_flat.begin(),
                                             total_flat.end());
  optimizer_.Step(params, grads, row.lr);
  net_.ClipLatent();
  anneal_calls_ += net_.AnnealStep() > 0 ? 1 : 0;
  last_grads_ = std::move(total);
  ++iteration_;

  if (opts_.record_wall_time) {
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return row;
}

}  // namespace tha
