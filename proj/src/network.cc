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

#include "tha/network.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tha/errors.h"
#include "tha/rng.h"

namespace tha {

Network::Network(Precision precision, std::vector<Layer> layers)
    : precision_(precision), layers_(std::move(layers)) {
  THA_REQUIRE(!layers_.empty(), "network needs at least one layer");
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    if (layers_[i].fan_in() != layers_[i - 1].size()) {
      throw ContractError("layer " + std::to_string(i + 1) + " fan-in " +
                          std::to_string(layers_[i].fan_in()) +
                          " does not match layer " + std::to_string(i) +
                          " size " + std::to_string(layers_[i - 1].size()));
    }
  }
  for (const Layer& l : layers_) {
    THA_REQUIRE(l.beta >= 0.0 && l.beta <= 1.0, "beta must lie in [0, 1]");
    THA_REQUIRE(l.dropout >= 0.0 && l.dropout < 1.0,
                "dropout must lie in [0, 1)");
    THA_REQUIRE(l.surrogate.k >= 0.0, "surrogate slope must be >= 0");
  }
}

Matrix Network::EffectiveWeights(std::size_t i) const {
  const LatentWeightMatrix& w = layers_[i].weights;
  return precision_ == Precision::kBinarized ? w.BinarizeView() : w.latent();
}

std::vector<Matrix> Network::AllEffectiveWeights() const {
  std::vector<Matrix> out;
  out.reserve(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i)
    out.push_back(EffectiveWeights(i));
  return out;
}

std::vector<std::span<double>> Network::Parameters() {
  std::vector<std::span<double>> out;
  for (Layer& l : layers_) {
    out.push_back(l.weights.latent().flat());
    if (l.weights.has_bias()) out.push_back(l.weights.bias());
  }
  return out;
}

void Network::ClipLatent() {
  for (Layer& l : layers_) l.weights.ClipLatent();
}

std::size_t Network::AnnealStep() {
  for (Layer& l : layers_) l.threshold.Step();
  return layers_.size();
}

std::vector<std::span<double>> Gradients::Flat() {
  std::vector<std::span<double>> out;
  for (LayerGrad& l : layers) {
    out.push_back(l.latent.flat());
    if (!l.bias.empty()) out.push_back(l.bias);
  }
  return out;
}

std::vector<std::span<const double>> Gradients::Flat() const {
  std::vector<std::span<const double>> out;
  for (const LayerGrad& l : layers) {
    out.push_back(l.latent.flat());
    if (!l.bias.empty()) out.push_back(l.bias);
  }
  return out;
}

Gradients ZeroGradients(const Network& net) {
  Gradients g;
  g.layers.resize(net.num_layers());
  for (std::size_t i = 0; i < net.num_layers(); ++i) {
    const LatentWeightMatrix& w = net.layer(i).weights;
    g.layers[i].effective = Matrix(w.rows(), w.cols());
    g.layers[i].latent = Matrix(w.rows(), w.cols());
    g.layers[i].bias.assign(w.bias().size(), 0.0);
  }
  return g;
}

namespace {

void NonZeros(std::span<const double> x, std::vector<std::size_t>& nz) {
  nz.clear();
  for (std::size_t c = 0; c < x.size(); ++c)
    if (x[c] != 0.0) nz.push_back(c);
}

bool SameRow(const Matrix& m, std::size_t a, std::size_t b) {
  const auto ra = m.row(a);
  const auto rb = m.row(b);
  return std::equal(ra.begin(), ra.end(), rb.begin());
}

double LayerTheta(const Layer& l, ThresholdPolicy policy) {
  return policy == ThresholdPolicy::kEvaluation ? l.threshold.EvalTheta()
                                                : l.threshold.theta();
}

}  // namespace

Tape Forward(const Network& net, const Matrix& input,
             const ForwardOptions& opts) {
  const auto effective = net.AllEffectiveWeights();
  return Forward(net, effective, input, opts);
}

Tape Forward(const Network& net, std::span<const Matrix> effective,
             const Matrix& input, const ForwardOptions& opts) {
  const std::size_t num_layers = net.num_layers();
  THA_REQUIRE(effective.size() == num_layers,
              "forward: effective weight count does not match layers");
  if (input.cols() != net.input_size()) {
    throw ContractError("forward: input has " + std::to_string(input.cols()) +
                        " channels, network expects " +
                        std::to_string(net.input_size()));
  }
  const std::size_t steps = input.rows();
  THA_REQUIRE(steps >= 1, "forward: input must have at least one step");

  Tape tape;
  tape.steps = steps;
  tape.layers.resize(num_layers);
  Rng rng(opts.dropout_seed);
  std::vector<LifLayer> lif;
  lif.reserve(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const Layer& layer = net.layer(l);
    LayerTape& lt = tape.layers[l];
    const std::size_t n = layer.size();
    lt.input = Matrix(steps, layer.fan_in());
    lt.u = Matrix(steps, n);
    lt.spikes = Matrix(steps, n);
    lt.out = Matrix(steps, n);
    lt.theta_per_step.assign(steps, 0.0);
    lt.theta = LayerTheta(layer, opts.threshold);
    const bool hidden = l + 1 < num_layers;
    if (opts.train && hidden && layer.dropout > 0.0) {
      const double keep = 1.0 / (1.0 - layer.dropout);
      lt.mask.resize(n);
      for (double& m : lt.mask) m = rng.Bernoulli(layer.dropout) ? 0.0 : keep;
    }
    lif.emplace_back(n, layer.beta, lt.theta);
  }

  std::vector<std::vector<double>> current(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l)
    current[l].assign(net.layer(l).size(), 0.0);
  std::vector<std::size_t> nz;

  for (std::size_t t = 0; t < steps; ++t) {
    std::span<const double> x = input.row(t);
    for (std::size_t l = 0; l < num_layers; ++l) {
      const Layer& layer = net.layer(l);
      LayerTape& lt = tape.layers[l];
      const Matrix& w = effective[l];
      if (l == 0) std::copy(x.begin(), x.end(), lt.input.row(t).begin());

      // Identical consecutive inputs (static currents) reuse the current.
      if (t == 0 || !SameRow(lt.input, t, t - 1)) {
        NonZeros(x, nz);
        const auto& bias = layer.weights.bias();
        for (std::size_t j = 0; j < layer.size(); ++j) {
          const auto row = w.row(j);
          double s = bias.empty() ? 0.0 : bias[j];
          for (std::size_t c : nz) s += row[c] * x[c];
          current[l][j] = s;
        }
      }
      try {
        lif[l].Step(current[l]);
      } catch (const NumericError&) {
        throw NumericError("forward: non-finite current in layer " +
                           std::to_string(l + 1) + " at step " +
                           std::to_string(t));
      }
      lt.theta_per_step[t] = lif[l].theta();
      const auto u = lif[l].u();
      const auto z = lif[l].spikes();
      auto u_row = lt.u.row(t);
      auto z_row = lt.spikes.row(t);
      auto o_row = lt.out.row(t);
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (!std::isfinite(u[j])) {
          throw NumericError("forward: non-finite membrane in layer " +
                             std::to_string(l + 1) + " at step " +
                             std::to_string(t));
        }
        u_row[j] = u[j];
        z_row[j] = z[j];
        o_row[j] = opts.spike_fn == SpikeFn::kHeaviside
                       ? z[j]
                       : SmoothSpike(u[j], layer.surrogate);
      }
      if (l + 1 < num_layers) {
        // Next layer reads the masked output; stage it in the next tape row.
        LayerTape& next = tape.layers[l + 1];
        auto dst = next.input.row(t);
        for (std::size_t j = 0; j < o_row.size(); ++j)
          dst[j] = lt.mask.empty() ? o_row[j] : o_row[j] * lt.mask[j];
        x = dst;
      }
    }
  }
  return tape;
}

Gradients Backward(const Network& net, const Tape& tape, const LossGrad& grad) {
  const auto effective = net.AllEffectiveWeights();
  return Backward(net, effective, tape, grad);
}

Gradients Backward(const Network& net, std::span<const Matrix> effective,
                   const Tape& tape, const LossGrad& grad) {
  const std::size_t num_layers = net.num_layers();
  const std::size_t steps = tape.steps;
  THA_REQUIRE(effective.size() == num_layers,
              "backward: effective weight count does not match layers");
  THA_REQUIRE(tape.layers.size() == num_layers && steps >= 1,
              "backward: tape does not cover every layer");
  for (std::size_t l = 0; l < num_layers; ++l) {
    const LayerTape& lt = tape.layers[l];
    const std::size_t n = net.layer(l).size();
    THA_REQUIRE(lt.u.rows() == steps && lt.u.cols() == n &&
                    lt.input.rows() == steps &&
                    lt.input.cols() == net.layer(l).fan_in(),
                "backward: tape entries missing or misshapen for layer " +
                    std::to_string(l + 1));
  }
  const std::size_t n_out = net.output_size();
  for (const Matrix* m : {&grad.d_u, &grad.d_out}) {
    THA_REQUIRE(m->empty() || (m->rows() == steps && m->cols() == n_out),
                "backward: loss gradient shape does not match output trace");
  }

  Gradients g = ZeroGradients(net);
  Matrix d_out = grad.d_out;
  std::vector<std::size_t> nz;

  for (std::size_t li = num_layers; li-- > 0;) {
    const Layer& layer = net.layer(li);
    const LayerTape& lt = tape.layers[li];
    const std::size_t n = layer.size();
    const bool top = li + 1 == num_layers;

    Matrix delta(steps, n);
    std::vector<double> carry(n, 0.0);
    for (std::size_t t = steps; t-- > 0;) {
      for (std::size_t j = 0; j < n; ++j) {
        double d = layer.beta * carry[j];
        if (top && !grad.d_u.empty()) d += grad.d_u(t, j);
        if (!d_out.empty())
          d += d_out(t, j) * SurrogateGrad(lt.u(t, j), layer.surrogate);
        delta(t, j) = d;
        carry[j] = d;
      }
    }

    LayerGrad& lg = g.layers[li];
    if (!lg.bias.empty()) {
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t j = 0; j < n; ++j) lg.bias[j] += delta(t, j);
    }
    // Runs of identical inputs share one outer product.
    std::vector<double> acc(n, 0.0);
    for (std::size_t t = steps; t-- > 0;) {
      for (std::size_t j = 0; j < n; ++j) acc[j] += delta(t, j);
      if (t > 0 && SameRow(lt.input, t, t - 1)) continue;
      const auto x = lt.input.row(t);
      NonZeros(x, nz);
      if (!nz.empty()) {
        for (std::size_t j = 0; j < n; ++j) {
          if (acc[j] == 0.0) continue;
          auto grow = lg.effective.row(j);
          for (std::size_t c : nz) grow[c] += acc[j] * x[c];
        }
      }
      std::fill(acc.begin(), acc.end(), 0.0);
    }
    lg.latent = net.precision() == Precision::kBinarized
                    ? SteBackward(lg.effective, layer.weights)
                    : lg.effective;

    if (li == 0) break;
    const Matrix& w = effective[li];
    const std::vector<double>& mask = tape.layers[li - 1].mask;
    Matrix d_prev(steps, layer.fan_in());
    for (std::size_t t = 0; t < steps; ++t) {
      auto drow = d_prev.row(t);
      for (std::size_t j = 0; j < n; ++j) {
        const double dj = delta(t, j);
        if (dj == 0.0) continue;
        const auto wrow = w.row(j);
        for (std::size_t c = 0; c < drow.size(); ++c) drow[c] += dj * wrow[c];
      }
      if (!mask.empty()) {
        for (std::size_t c = 0; c < drow.size(); ++c) drow[c] *= mask[c];
      }
    }
    d_out = std::move(d_prev);
  }
  return g;
}

}  // namespace tha
