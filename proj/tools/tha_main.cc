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

// Command-line driver: tha {temporal|mnist|sparse|census|presets} [flags].
// Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tha/checkpoint.h"
#include "tha/config.h"
#include "tha/diagnostics.h"
#include "tha/errors.h"
#include "tha/experiments.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct Flags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> limit_train;
  std::optional<std::size_t> limit_test;
  std::optional<std::size_t> threads;
  std::vector<std::string> sets;
  bool force = false;
  bool quiet = false;
  std::string checkpoint;
};

void AddRunFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config,
                  "key=value file or a JSON run sidecar");
  cmd->add_option("--preset", f.preset, "built-in preset (see `presets`)");
  cmd->add_option("--seed", f.seed, "run seed (default 0)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--limit-train", f.limit_train, "MNIST training samples");
  cmd->add_option("--limit-test", f.limit_test, "MNIST test samples");
  cmd->add_option("--threads", f.threads, "worker threads per batch");
  cmd->add_option("--set", f.sets, "override: key=value (repeatable)");
  cmd->add_flag("--force", f.force, "overwrite existing outputs");
  cmd->add_flag("--quiet", f.quiet, "no per-iteration progress");
}

// preset < config file < flags. The preset comes from --preset, or from the
// file's own `preset` key.
tha::ExperimentConfig Resolve(const Flags& f, const std::string& experiment) {
  tha::ConfigMap file;
  if (!f.config.empty()) file = tha::LoadConfigFile(f.config);
  std::string preset = f.preset;
  if (preset.empty() && file.count("preset")) preset = file.at("preset");
  tha::ConfigMap map;
  if (!preset.empty()) map = tha::PresetMap(preset);
  map = tha::Merge(map, file);
  if (!preset.empty()) map["preset"] = preset;

  tha::ConfigMap over;
  for (const std::string& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw tha::ConfigError("--set", "expected key=value, got '" + s + "'");
    over[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (f.seed) over["seed"] = std::to_string(*f.seed);
  if (!f.out.empty()) over["out"] = f.out;
  if (f.limit_train) over["mnist.limit_train"] = std::to_string(*f.limit_train);
  if (f.limit_test) over["mnist.limit_test"] = std::to_string(*f.limit_test);
  if (f.threads) over["threads"] = std::to_string(*f.threads);
  map = tha::Merge(map, over);

  if (!experiment.empty()) {
    const auto it = map.find("experiment");
    if (it != map.end() && it->second != experiment)
      throw tha::ConfigError("experiment", "config is for '" + it->second +
                                               "', not '" + experiment + "'");
    map["experiment"] = experiment;
  }
  return tha::FromMap(map);
}

std::string Stem(const tha::ExperimentConfig& cfg) {
  return tha::ExperimentName(cfg.experiment) + "_" +
         (cfg.preset.empty() ? "custom" : cfg.preset) + "_seed" +
         std::to_string(cfg.seed);
}

void RefuseExisting(const std::vector<std::filesystem::path>& paths,
                    bool force) {
  if (force) return;
  for (const auto& p : paths)
    if (std::filesystem::exists(p))
      throw tha::DataError(tha::DataError::Kind::kExists,
                           "refusing to overwrite '" + p.string() +
                               "' (use --force)");
}

int RunCommand(const Flags& f, const std::string& experiment) {
  const tha::ExperimentConfig cfg = Resolve(f, experiment);
  const std::filesystem::path dir(cfg.out_dir);
  const std::string stem = Stem(cfg);
  const auto net_path = dir / (stem + ".net");
  RefuseExisting({dir / (stem + ".csv"), dir / (stem + ".json"), net_path},
                 f.force);

  tha::ProgressFn progress;
  if (!f.quiet) {
    progress = [](const tha::IterationRow& row) {
      if (row.iteration % 50 != 0) return;
      std::fprintf(stderr, "iter %llu epoch %llu loss %.6g theta_out %.6g\n",
                   static_cast<unsigned long long>(row.iteration),
                   static_cast<unsigned long long>(row.epoch), row.loss,
                   row.theta.back());
    };
  }
  const tha::RunOutput out = tha::RunExperiment(cfg, progress);
  const tha::EmittedFiles files = tha::EmitRun(out.record, dir.string(), stem,
                                               f.force);
  tha::SaveNetwork(net_path.string(), out.net, true);

  std::cout << "run: " << stem << "\n";
  std::cout << "final_loss: " << out.record.rows.back().loss << "\n";
  if (cfg.experiment == tha::Experiment::kTemporal) {
    const auto& hit = out.temporal.first_hit;
    std::cout << "first_hit: " << (hit ? std::to_string(*hit) : "none")
              << "\n";
    std::cout << "output_spikes_total: " << out.temporal.output_spike_total
              << "\n";
  } else {
    std::cout << "test_accuracy: " << out.classify.test_accuracy << "\n";
    std::cout << "ties: " << out.classify.ties << "\n";
  }
  std::cout << "sidecar: " << files.sidecar << "\n";
  std::cout << "checkpoint: " << net_path.string() << "\n";
  return 0;
}

int CensusCommand(const Flags& f) {
  const tha::ExperimentConfig cfg = Resolve(f, "");
  const tha::Network net = tha::LoadNetwork(f.checkpoint);
  const tha::ActivityCensus census = tha::CensusForConfig(net, cfg);
  tha::RunRecord record;
  record.experiment = tha::ExperimentName(cfg.experiment);
  record.preset = cfg.preset;
  record.seed = cfg.seed;
  record.num_layers = net.num_layers();
  for (const auto& [k, v] : tha::ToMap(cfg)) record.config[k] = v;
  record.results["checkpoint"] = f.checkpoint;
  record.census = census;
  const tha::EmittedFiles files =
      tha::EmitRun(record, cfg.out_dir, Stem(cfg) + "_census", f.force);
  for (std::size_t l = 0; l < census.layers.size(); ++l)
    std::cout << "layer " << l + 1
              << " dead_fraction: " << census.layers[l].dead_fraction << "\n";
  std::cout << "sidecar: " << files.sidecar << "\n";
  return 0;
}

int PresetsCommand(const std::string& show) {
  if (!show.empty()) {
    for (const auto& [k, v] : tha::ToMap(tha::FromMap(tha::PresetMap(show))))
      std::cout << k << " = " << v << "\n";
    return 0;
  }
  for (const auto& [name, map] : tha::Presets())
    std::cout << name << "\t" << map.at("experiment") << "\t"
              << map.at("mode") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-annealed binarized spiking network experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::string show;
  CLI::App* temporal = app.add_subcommand("temporal", "spike-timing task");
  CLI::App* mnist = app.add_subcommand("mnist", "dense MNIST classifier");
  CLI::App* sparse =
      app.add_subcommand("sparse", "synthetic sparse-rate classifier");
  CLI::App* census =
      app.add_subcommand("census", "activity census of a checkpoint");
  CLI::App* presets = app.add_subcommand("presets", "list built-in presets");
  for (CLI::App* cmd : {temporal, mnist, sparse, census}) AddRunFlags(cmd, flags);
  census->add_option("--checkpoint", flags.checkpoint, "network checkpoint")
      ->required();
  presets->add_option("--show", show, "print every resolved key of a preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*temporal) return RunCommand(flags, "temporal");
    if (*mnist) return RunCommand(flags, "mnist");
    if (*sparse) return RunCommand(flags, "sparse");
    if (*census) return CensusCommand(flags);
    return PresetsCommand(show);
  } catch (const tha::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const tha::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const tha::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
