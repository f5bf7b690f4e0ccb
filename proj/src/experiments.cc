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

#include "tha/experiments.h"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>
#include <thread>

#include "tha/errors.h"
#include "tha/train.h"

namespace tha {
namespace {

TrainOptions MakeTrainOptions(const ExperimentConfig& cfg) {
  TrainOptions o;
  o.lr_period = cfg.lr_period;
  o.grad_clip = cfg.grad_clip;
  o.grad_clip_norm = cfg.grad_clip_norm;
  o.threads = cfg.threads;
  o.seed = cfg.seed;
  o.bound_mode = cfg.bound_mode;
  o.record_wall_time = cfg.record_wall_time;
  return o;
}

RunRecord NewRecord(const ExperimentConfig& cfg, std::size_t num_layers) {
  RunRecord r;
  r.experiment = ExperimentName(cfg.experiment);
  r.preset = cfg.preset;
  r.seed = cfg.seed;
  r.num_layers = num_layers;
  for (const auto& [k, v] : ToMap(cfg)) r.config[k] = v;
  return r;
}

nlohmann::json ThresholdSummary(const Network& net) {
  nlohmann::json theta = nlohmann::json::array();
  nlohmann::json eval = nlohmann::json::array();
  for (const Layer& l : net.layers()) {
    theta.push_back(l.threshold.theta());
    eval.push_back(l.threshold.EvalTheta());
  }
  return {{"final_theta", theta}, {"eval_theta", eval}};
}

// Fraction of neurons per layer without a spike in `tape`.
std::vector<std::optional<double>> TapeDeadFraction(const Tape& tape) {
  std::vector<std::optional<double>> out;
  for (const LayerTape& l : tape.layers) {
    std::size_t dead = 0;
    for (std::size_t j = 0; j < l.spikes.cols(); ++j) {
      bool fired = false;
      for (std::size_t t = 0; t < l.spikes.rows() && !fired; ++t)
        fired = l.spikes(t, j) != 0.0;
      dead += fired ? 0 : 1;
    }
    out.push_back(static_cast<double>(dead) /
                  static_cast<double>(l.spikes.cols()));
  }
  return out;
}

std::vector<double> Column(const Matrix& m, std::size_t c) {
  std::vector<double> v(m.rows());
  for (std::size_t t = 0; t < m.rows(); ++t) v[t] = m(t, c);
  return v;
}

void RequireExperiment(const ExperimentConfig& cfg, Experiment e) {
  if (cfg.experiment != e)
    throw ConfigError("experiment", "expected " + ExperimentName(e) +
                                        ", got " +
                                        ExperimentName(cfg.experiment));
}

struct Dataset {
  std::size_t train_size = 0;
  std::function<Sample(std::size_t)> train;
  std::size_t test_size = 0;
  InputFn test_input;
  std::vector<int> test_labels;
};

RunOutput RunClassification(const ExperimentConfig& cfg, const Dataset& data,
                            const ProgressFn& progress) {
  if (data.train_size == 0) throw ConfigError("", "empty training set");
  if (data.test_size == 0) throw ConfigError("", "empty test set");
  RunOutput out;
  Rng init(DeriveSeed(cfg.seed, kStreamInit));
  out.net = BuildNetwork(cfg, init);
  out.record = NewRecord(cfg, out.net.num_layers());

  SpikeCountObjective objective(cfg.count_targets);
  Trainer trainer(out.net, objective, cfg.optimizer, MakeTrainOptions(cfg));
  CensusOptions census_opts{cfg.dead_epsilon, cfg.threads};

  std::vector<std::size_t> order(data.train_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle(DeriveSeed(cfg.seed, kStreamShuffle));
  std::vector<Sample> batch;
  for (std::uint64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle.Below(i)]);
    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i)
        batch.push_back(data.train(order[i]));
      IterationRow row = trainer.Iterate(batch, epoch);
      if (cfg.census_every > 0 && row.iteration % cfg.census_every == 0) {
        const ActivityCensus c =
            Census(out.net, data.test_size, data.test_input, census_opts);
        for (std::size_t l = 0; l < c.layers.size(); ++l)
          row.dead_fraction[l] = c.layers[l].dead_fraction;
      }
      if (progress) progress(row);
      out.record.rows.push_back(std::move(row));
    }
  }

  out.classify = EvaluateClassifier(out.net, data.test_size, data.test_input,
                                    data.test_labels, cfg.threads);
  out.record.census =
      Census(out.net, data.test_size, data.test_input, census_opts);
  nlohmann::json& res = out.record.results;
  res = ThresholdSummary(out.net);
  res["test_accuracy"] = out.classify.test_accuracy;
  res["ties"] = out.classify.ties;
  res["train_samples"] = data.train_size;
  res["test_samples"] = data.test_size;
  res["iterations"] = out.record.rows.size();
  res["final_loss"] = out.record.rows.back().loss;
  nlohmann::json dead = nlohmann::json::array();
  for (const auto& l : out.record.census->layers) dead.push_back(l.dead_fraction);
  res["dead_fraction"] = dead;
  return out;
}

}  // namespace

Network BuildNetwork(const ExperimentConfig& cfg, Rng& rng) {
  THA_REQUIRE(cfg.layers.size() + 1 == cfg.sizes.size(),
              "one layer config per weight layer");
  std::vector<Layer> layers;
  for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
    const LayerConfig& lc = cfg.layers[l];
    Layer layer;
    layer.weights = LatentWeightMatrix::InitDense(
        cfg.sizes[l + 1], cfg.sizes[l], rng, true, cfg.weight_clip);
    layer.beta = lc.beta;
    layer.dropout = lc.dropout;
    if (cfg.mode == Mode::kBsnnAnneal) {
      layer.threshold = AnnealSchedule(lc.theta0, lc.theta_inf, lc.alpha);
      layer.surrogate = {lc.theta0, lc.k};
    } else {
      layer.threshold = AnnealSchedule::Fixed(lc.theta);
      layer.surrogate = {lc.theta, lc.k};
    }
    layers.push_back(std::move(layer));
  }
  return Network(cfg.mode == Mode::kFullPrecision ? Precision::kFull
                                                  : Precision::kBinarized,
                 std::move(layers));
}

RunOutput RunTemporal(const ExperimentConfig& cfg, const ProgressFn& progress) {
  RequireExperiment(cfg, Experiment::kTemporal);
  if (cfg.iterations == 0) throw ConfigError("iterations", "must be positive");
  RunOutput out;
  Rng init(DeriveSeed(cfg.seed, kStreamInit));
  out.net = BuildNetwork(cfg, init);
  out.record = NewRecord(cfg, out.net.num_layers());

  TemporalOutcome& tmp = out.temporal;
  Rng input_rng(DeriveSeed(cfg.seed, kStreamInput));
  tmp.input_rates.resize(cfg.sizes.front());
  for (double& r : tmp.input_rates) r = input_rng.Uniform(0.0, cfg.rate_max);
  tmp.input = PoissonEncode(tmp.input_rates, cfg.steps, input_rng);
  const std::vector<Sample> batch{{tmp.input, -1}};

  MembraneTargetObjective objective(cfg.t_spike, cfg.peak_scale,
                                    cfg.theta_ref);
  Trainer trainer(out.net, objective, cfg.optimizer, MakeTrainOptions(cfg));
  std::set<std::uint64_t> logged(cfg.log_iterations.begin(),
                                 cfg.log_iterations.end());
  logged.insert(cfg.iterations - 1);

  const std::size_t lo = cfg.t_spike >= cfg.spike_window
                             ? cfg.t_spike - cfg.spike_window
                             : 0;
  const std::size_t hi = cfg.t_spike + cfg.spike_window;
  for (std::uint64_t it = 0; it < cfg.iterations; ++it) {
    const bool log = logged.count(it) > 0;
    Matrix target;
    if (log) target = objective.Target(out.net, cfg.steps);
    IterationRow row = trainer.Iterate(batch);
    const Tape& tape = trainer.first_tape();

    std::vector<std::size_t> times;
    const Matrix& z = tape.output_spikes();
    for (std::size_t t = 0; t < z.rows(); ++t)
      for (std::size_t j = 0; j < z.cols(); ++j)
        if (z(t, j) != 0.0) times.push_back(t);
    tmp.output_spike_total += times.size();
    if (!tmp.first_hit && times.size() == 1 && times[0] >= lo &&
        times[0] <= hi)
      tmp.first_hit = it;
    tmp.output_spikes.push_back(std::move(times));

    if (cfg.census_every > 0 && it % cfg.census_every == 0)
      row.dead_fraction = TapeDeadFraction(tape);
    if (log) {
      out.record.traces.push_back({it, Column(tape.output_u(), 0),
                                   Column(target, 0),
                                   Column(tape.output_spikes(), 0)});
    }
    if (progress) progress(row);
    out.record.rows.push_back(std::move(row));
  }

  out.record.census =
      Census(out.net, batch, {cfg.dead_epsilon, cfg.threads});
  nlohmann::json& res = out.record.results;
  res = ThresholdSummary(out.net);
  res["input_rates"] = tmp.input_rates;
  res["final_loss"] = out.record.rows.back().loss;
  res["first_hit"] = tmp.first_hit ? nlohmann::json(*tmp.first_hit)
                                   : nlohmann::json(nullptr);
  res["hit_window"] = {lo, hi};
  res["output_spike_total"] = tmp.output_spike_total;
  res["output_spike_steps"] = tmp.output_spikes;
  return out;
}

RunOutput RunMnist(const ExperimentConfig& cfg, const ProgressFn& progress) {
  RequireExperiment(cfg, Experiment::kMnist);
  const std::filesystem::path dir(cfg.mnist_dir);
  const MnistSet train =
      LoadMnistIdx((dir / "train-images-idx3-ubyte").string(),
                   (dir / "train-labels-idx1-ubyte").string(), cfg.limit_train,
                   "train");
  const MnistSet test =
      LoadMnistIdx((dir / "t10k-images-idx3-ubyte").string(),
                   (dir / "t10k-labels-idx1-ubyte").string(), cfg.limit_test,
                   "test");
  return RunMnist(cfg, train, test, progress);
}

RunOutput RunMnist(const ExperimentConfig& cfg, const MnistSet& train,
                   const MnistSet& test, const ProgressFn& progress) {
  RequireExperiment(cfg, Experiment::kMnist);
  const std::size_t steps = cfg.steps;
  Dataset data;
  data.train_size = train.size();
  data.train = [&train, steps](std::size_t i) {
    return Sample{StaticCurrent(train.images.row(i), steps),
                  static_cast<int>(train.labels[i])};
  };
  data.test_size = test.size();
  data.test_input = [&test, steps](std::size_t i) {
    return StaticCurrent(test.images.row(i), steps);
  };
  data.test_labels.assign(test.labels.begin(), test.labels.end());
  return RunClassification(cfg, data, progress);
}

RunOutput RunSparse(const ExperimentConfig& cfg, const ProgressFn& progress) {
  RequireExperiment(cfg, Experiment::kSparse);
  const SparseTask task =
      MakeSparseTask(cfg.sparse, DeriveSeed(cfg.seed, kStreamInput));
  Dataset data;
  data.train_size = task.train.size();
  data.train = [&task](std::size_t i) { return task.train[i]; };
  data.test_size = task.test.size();
  data.test_input = [&task](std::size_t i) { return task.test[i].input; };
  for (const Sample& s : task.test) data.test_labels.push_back(s.label);
  return RunClassification(cfg, data, progress);
}

RunOutput RunExperiment(const ExperimentConfig& cfg,
                        const ProgressFn& progress) {
  switch (cfg.experiment) {
    case Experiment::kTemporal:
      return RunTemporal(cfg, progress);
    case Experiment::kMnist:
      return RunMnist(cfg, progress);
    case Experiment::kSparse:
      return RunSparse(cfg, progress);
  }
  throw ConfigError("experiment", "unknown experiment");
}

int PredictClass(const Matrix& output_spikes, bool* tie) {
  THA_REQUIRE(output_spikes.cols() > 0, "no output neurons");
  std::vector<double> counts(output_spikes.cols(), 0.0);
  for (std::size_t t = 0; t < output_spikes.rows(); ++t)
    for (std::size_t j = 0; j < counts.size(); ++j)
      counts[j] += output_spikes(t, j);
  std::size_t best = 0;
  for (std::size_t j = 1; j < counts.size(); ++j)
    if (counts[j] > counts[best]) best = j;
  if (tie) {
    *tie = false;
    for (std::size_t j = 0; j < counts.size(); ++j)
      if (j != best && counts[j] == counts[best]) *tie = true;
  }
  return static_cast<int>(best);
}

ClassifyOutcome EvaluateClassifier(const Network& net, std::size_t count,
                                   const InputFn& input,
                                   std::span<const int> labels,
                                   std::size_t threads) {
  THA_REQUIRE(count > 0 && labels.size() == count,
              "evaluation needs one label per input");
  THA_REQUIRE(threads >= 1, "evaluation needs at least one thread");
  const std::vector<Matrix> effective = net.AllEffectiveWeights();
  ForwardOptions fo;
  fo.threshold = ThresholdPolicy::kEvaluation;
  ClassifyOutcome out;
  out.predictions.assign(count, -1);
  std::vector<char> ties(count, 0);
  const std::size_t workers = std::min(threads, count);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < count; i += workers) {
      const Tape tape = Forward(net, effective, input(i), fo);
      bool tie = false;
      out.predictions[i] = PredictClass(tape.output_spikes(), &tie);
      ties[i] = tie ? 1 : 0;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < count; ++i) {
    correct += out.predictions[i] == labels[i] ? 1 : 0;
    out.ties += ties[i];
  }
  out.test_accuracy = static_cast<double>(correct) / static_cast<double>(count);
  return out;
}

ActivityCensus CensusForConfig(const Network& net, const ExperimentConfig& cfg) {
  const CensusOptions opts{cfg.dead_epsilon, cfg.threads};
  switch (cfg.experiment) {
    case Experiment::kTemporal: {
      Rng input_rng(DeriveSeed(cfg.seed, kStreamInput));
      std::vector<double> rates(cfg.sizes.front());
      for (double& r : rates) r = input_rng.Uniform(0.0, cfg.rate_max);
      const std::vector<Sample> set{
          {PoissonEncode(rates, cfg.steps, input_rng), -1}};
      return Census(net, set, opts);
    }
    case Experiment::kMnist: {
      const std::filesystem::path dir(cfg.mnist_dir);
      const MnistSet test =
          LoadMnistIdx((dir / "t10k-images-idx3-ubyte").string(),
                       (dir / "t10k-labels-idx1-ubyte").string(),
                       cfg.limit_test, "test");
      const std::size_t steps = cfg.steps;
      return Census(
          net, test.size(),
          [&](std::size_t i) { return StaticCurrent(test.images.row(i), steps); },
          opts);
    }
    case Experiment::kSparse: {
      const SparseTask task =
          MakeSparseTask(cfg.sparse, DeriveSeed(cfg.seed, kStreamInput));
      return Census(net, task.test, opts);
    }
  }
  throw ConfigError("experiment", "unknown experiment");
}

}  // namespace tha
