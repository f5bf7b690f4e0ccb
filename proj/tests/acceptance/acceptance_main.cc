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

// Runs every acceptance check end to end and prints one PASS/FAIL line per
// criterion. Thresholds are fixed here, not read from the configs under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "gradcheck.h"
#include "json.hpp"
#include "tha/anneal.h"
#include "tha/config.h"
#include "tha/diagnostics.h"
#include "tha/errors.h"
#include "tha/experiments.h"

namespace fs = std::filesystem;

namespace tha {
namespace {

constexpr int kSeeds = 5;

// Criterion thresholds.
constexpr std::uint64_t kHitByIteration = 800;
constexpr std::size_t kTargetStep = 75;
constexpr std::size_t kHitWindow = 3;
constexpr int kHitSeedsNeeded = 3;
constexpr int kLossSeedsNeeded = 4;
constexpr double kConvergedRel = 1e-3;
constexpr double kTrajectoryRel = 1e-9;
constexpr int kGradNets = 20;
constexpr double kGradRel = 1e-4;
constexpr double kGradSeconds = 60.0;
constexpr int kClampSteps = 100;
constexpr int kDeadSeedsNeeded = 4;
constexpr double kMnistMargin = 0.005;
constexpr int kMnistSeedsNeeded = 3;
constexpr double kMnistFloor = 0.80;
constexpr std::size_t kMnistTrain = 2000;
constexpr std::size_t kMnistTest = 1000;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig Config(const std::string& preset, std::uint64_t seed,
                        const ConfigMap& over = {}) {
  ConfigMap m = PresetMap(preset);
  m["seed"] = std::to_string(seed);
  for (const auto& [k, v] : over) m[k] = v;
  return FromMap(m);
}

class Runs {
 public:
  const RunOutput& Temporal(const std::string& preset, std::uint64_t seed) {
    auto key = std::make_pair(preset, seed);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::fprintf(stderr, "  running temporal %s seed %llu\n", preset.c_str(),
                   static_cast<unsigned long long>(seed));
      it = cache_.emplace(key, RunTemporal(Config(preset, seed))).first;
    }
    return it->second;
  }

 private:
  std::map<std::pair<std::string, std::uint64_t>, RunOutput> cache_;
};

double FinalLoss(const RunOutput& r) {
  return r.record.results.at("final_loss").get<double>();
}

std::optional<std::uint64_t> FirstHit(const TemporalOutcome& t) {
  for (std::size_t i = 0; i < t.output_spikes.size(); ++i) {
    const auto& s = t.output_spikes[i];
    if (s.size() == 1 && s[0] + kHitWindow >= kTargetStep &&
        s[0] <= kTargetStep + kHitWindow)
      return i;
  }
  return std::nullopt;
}

Verdict SpikeTiming(Runs& runs) {
  int hits = 0;
  std::string detail;
  for (int s = 0; s < kSeeds; ++s) {
    const auto hit = FirstHit(runs.Temporal("proposed", s).temporal);
    const bool ok = hit && *hit <= kHitByIteration;
    hits += ok;
    detail += Fmt(" s%d=%s", s,
                  hit ? std::to_string(*hit).c_str() : "none");
  }
  return {hits >= kHitSeedsNeeded,
          Fmt("%d/%d seeds hit within iteration %llu; first hit:", hits, kSeeds,
              static_cast<unsigned long long>(kHitByIteration)) +
              detail};
}

Verdict DeadControl(Runs& runs) {
  std::uint64_t total = 0;
  std::string detail;
  for (int s = 0; s < kSeeds; ++s) {
    const auto& r = runs.Temporal("fixed50", s);
    std::uint64_t n = 0;
    for (const auto& it : r.temporal.output_spikes) n += it.size();
    total += n;
    detail += Fmt(" s%d=%llu", s, static_cast<unsigned long long>(n));
  }
  return {total == 0, "output spikes per seed:" + detail};
}

Verdict Superiority(Runs& runs) {
  int wins = 0;
  std::string detail;
  for (int s = 0; s < kSeeds; ++s) {
    const double a = FinalLoss(runs.Temporal("proposed", s));
    const double f1 = FinalLoss(runs.Temporal("fixed1", s));
    const double f50 = FinalLoss(runs.Temporal("fixed50", s));
    wins += a < f1 && a < f50;
    detail += Fmt(" s%d=%.4g/%.4g/%.4g", s, a, f1, f50);
  }
  return {wins >= kLossSeedsNeeded,
          Fmt("%d/%d seeds below both controls; loss anneal/fixed1/fixed50:",
              wins, kSeeds) +
              detail};
}

Verdict Convergence(Runs& runs) {
  bool ok = true;
  double worst_end = 0.0, worst_traj = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const RunOutput& r = runs.Temporal("proposed", s);
    for (std::size_t l = 0; l < r.net.num_layers(); ++l) {
      const AnnealSchedule& th = r.net.layer(l).threshold;
      const double end = std::fabs(th.theta() - th.theta_inf()) / th.theta_inf();
      worst_end = std::max(worst_end, end);
      ok = ok && end <= kConvergedRel;
      for (const IterationRow& row : r.record.rows) {
        const double want = ClosedFormTheta(th.theta0(), th.theta_inf(),
                                            th.alpha(), row.iteration);
        const double rel = std::fabs(row.theta[l] - want) / std::fabs(want);
        worst_traj = std::max(worst_traj, rel);
        ok = ok && rel <= kTrajectoryRel;
      }
    }
  }
  return {ok, Fmt("max |theta-theta_inf|/theta_inf at end %.3g (limit %.0e), "
                  "max trajectory rel error %.3g (limit %.0e)",
                  worst_end, kConvergedRel, worst_traj, kTrajectoryRel)};
}

Verdict GradientOracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2026);
  int checked = 0, skipped = 0;
  double worst = 0.0;
  bool nonzero = true;
  while (checked < kGradNets + 4) {
    testing::RandomNetSpec spec;
    spec.sizes.push_back(1 + rng.Below(5));
    spec.sizes.push_back(1 + rng.Below(8));
    spec.sizes.push_back(1 + rng.Below(2));
    spec.steps = 1 + rng.Below(10);
    spec.precision = rng.Bernoulli(0.5) ? Precision::kFull : Precision::kBinarized;
    auto c = testing::MakeRandomCase(spec, rng);
    ForwardOptions fo;
    fo.spike_fn = SpikeFn::kSmooth;
    // Perturbations must not cross the reset or the surrogate kink.
    if (testing::ThresholdMargin(c.net, Forward(c.net, c.input, fo)) < 1e-3) {
      ++skipped;
      continue;
    }
    const auto r = testing::CheckGradients(c.net, c.input, c.loss);
    worst = std::max(worst, r.max_rel_error);
    nonzero = nonzero && !r.all_zero;
    ++checked;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return {worst <= kGradRel && nonzero && secs < kGradSeconds,
          Fmt("%d nets (%d skipped near threshold), max rel error %.3g "
              "(limit %.0e), %.2f s",
              checked, skipped, worst, kGradRel, secs)};
}

Verdict ClampContract() {
  Rng rng(77);
  int cases = 0;
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    auto c = testing::MakeRandomCase(
        {{5, 8, 2}, 10, trial % 2 ? Precision::kBinarized : Precision::kFull},
        rng);
    for (std::size_t l = 0; l < c.net.num_layers(); ++l) {
      Layer& layer = c.net.layer(l);
      layer.threshold = AnnealSchedule(0.3 + 0.1 * l, 4.0, 0.05);
      layer.surrogate.theta0 = layer.threshold.theta0();
    }
    const auto eff = c.net.AllEffectiveWeights();
    const Tape tape = Forward(c.net, eff, c.input);
    const LossGrad lg = testing::CheckLossGrad(tape, c.loss);
    const Gradients before = Backward(c.net, eff, tape, lg);
    for (int i = 0; i < kClampSteps; ++i) c.net.AnnealStep();
    const Gradients after = Backward(c.net, eff, tape, lg);
    const auto a = before.Flat();
    const auto b = after.Flat();
    ok = ok && a.size() == b.size();
    for (std::size_t p = 0; ok && p < a.size(); ++p)
      ok = a[p].size() == b[p].size() &&
           std::memcmp(a[p].data(), b[p].data(), a[p].size_bytes()) == 0;
    ++cases;
  }
  return {ok, Fmt("%d frozen tapes, gradients after %d anneal steps %s",
                  cases, kClampSteps, ok ? "bit-identical" : "differ")};
}

Verdict DeadDirection() {
  const ExperimentConfig probe = Config("sparse_anneal", 0);
  const ExperimentConfig fixed_probe = Config("sparse_fixed", 0);
  for (std::size_t l = 0; l < probe.layers.size(); ++l)
    if (fixed_probe.layers[l].theta != probe.layers[l].theta_inf)
      return {false, "sparse_fixed theta differs from sparse_anneal theta_inf"};
  if (probe.sparse.hot_rate > 0.05 || probe.sparse.base_rate > 0.05)
    return {false, "sparse input rates exceed 0.05"};
  int wins = 0;
  std::string detail;
  for (int s = 0; s < kSeeds; ++s) {
    std::fprintf(stderr, "  running sparse seed %d\n", s);
    const RunOutput a = RunSparse(Config("sparse_anneal", s));
    const RunOutput f = RunSparse(Config("sparse_fixed", s));
    const double da = a.record.census->layers[0].dead_fraction;
    const double df = f.record.census->layers[0].dead_fraction;
    wins += da < df;
    detail += Fmt(" s%d=%.3f/%.3f", s, da, df);
  }
  return {wins >= kDeadSeedsNeeded,
          Fmt("%d/%d seeds lower; hidden dead fraction anneal/fixed:", wins,
              kSeeds) +
              detail};
}

std::string MnistDir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("THA_MNIST_DIR")) return env;
  return THA_SOURCE_DIR "/data/mnist";
}

Verdict MnistComparison(const std::string& dir) {
  const ConfigMap over{{"mnist.dir", dir},
                       {"mnist.limit_train", std::to_string(kMnistTrain)},
                       {"mnist.limit_test", std::to_string(kMnistTest)}};
  int wins = 0;
  bool floor_ok = true;
  std::string detail;
  try {
    for (int s = 0; s < kSeeds; ++s) {
      std::fprintf(stderr, "  running mnist seed %d\n", s);
      const RunOutput a = RunMnist(Config("mnist_anneal", s, over));
      const RunOutput f = RunMnist(Config("mnist_fixed1", s, over));
      if (a.record.results.at("train_samples") != kMnistTrain ||
          a.record.results.at("test_samples") != kMnistTest)
        return {false, "MNIST files under " + dir + " hold too few samples"};
      const double aa = a.classify.test_accuracy;
      const double fa = f.classify.test_accuracy;
      wins += aa >= fa + kMnistMargin;
      floor_ok = floor_ok && aa >= kMnistFloor;
      detail += Fmt(" s%d=%.3f/%.3f", s, aa, fa);
    }
  } catch (const DataError& e) {
    return {false, std::string("MNIST data unavailable: ") + e.what()};
  }
  return {wins >= kMnistSeedsNeeded && floor_ok,
          Fmt("%d/%d seeds ahead by >= %.1f points, anneal >= %.0f%% on every "
              "seed: %s; accuracy anneal/fixed1:",
              wins, kSeeds, kMnistMargin * 100, kMnistFloor * 100,
              floor_ok ? "yes" : "no") +
              detail};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict Determinism(const std::string& mnist_dir) {
  const fs::path root = fs::temp_directory_path() /
                        ("tha_accept_" + std::to_string(::getpid()));
  std::vector<std::pair<std::string, ExperimentConfig>> cases = {
      {"temporal", Config("proposed", 4, {{"iterations", "150"}})},
      {"sparse", Config("sparse_anneal", 2,
                        {{"epochs", "2"}, {"sparse.train", "100"},
                         {"dropout", "0.2"}, {"census.every", "2"}})},
  };
  if (fs::exists(fs::path(mnist_dir) / "train-images-idx3-ubyte"))
    cases.push_back({"mnist", Config("mnist_anneal", 1,
                                     {{"mnist.dir", mnist_dir},
                                      {"mnist.limit_train", "128"},
                                      {"mnist.limit_test", "64"},
                                      {"epochs", "1"},
                                      {"dropout", "0.1"}})});
  const std::size_t widths[] = {1, 1, 4};
  bool ok = true;
  std::string detail;
  for (auto& [name, cfg] : cases) {
    std::vector<std::string> csvs;
    for (std::size_t run = 0; run < std::size(widths); ++run) {
      cfg.threads = widths[run];
      const RunOutput r = RunExperiment(cfg);
      const fs::path dir = root / (name + std::to_string(run));
      const EmittedFiles files = EmitRun(r.record, dir.string(), name, true);
      csvs.push_back(ReadFile(files.csv) + ReadFile(files.thresholds) +
                     ReadFile(files.histogram));
    }
    const bool same = csvs[0] == csvs[1] && csvs[0] == csvs[2];
    ok = ok && same && !csvs[0].empty();
    detail += " " + name + "=" + (same ? "identical" : "differ");
  }
  fs::remove_all(root);
  return {ok, "threads 1,1,4:" + detail};
}

Verdict AnalyticSuite() {
  // The frozen values must be what the checked-in script prints.
  const std::string cmd = "python3 " THA_SOURCE_DIR "/tools/oracle_values.py";
  std::string regenerated;
  if (FILE* p = popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) regenerated.append(buf, n);
    if (pclose(p) != 0) regenerated.clear();
  }
  if (regenerated.empty()) return {false, "could not run " + cmd};
  const auto frozen = nlohmann::json::parse(ReadFile(THA_ORACLE_PATH));
  if (nlohmann::json::parse(regenerated) != frozen)
    return {false, "expected_values.json is stale"};

  // Every value is consumed by some unit test.
  std::string sources;
  for (const auto& e : fs::directory_iterator(THA_SOURCE_DIR "/tests"))
    if (e.path().extension() == ".cc") sources += ReadFile(e.path().string());
  std::vector<std::string> unused;
  for (const auto& [key, _] : frozen.items())
    if (sources.find('"' + key + '"') == std::string::npos) unused.push_back(key);
  if (!unused.empty()) return {false, "no unit test reads " + unused.front()};

  // And every unit suite passes.
  int failed = 0;
  std::string first;
  for (const char* exe : {THA_UNIT_BINARIES}) {
    const std::string run = std::string(exe) + " > /dev/null 2>&1";
    if (std::system(run.c_str()) != 0) {
      if (!failed) first = fs::path(exe).filename().string();
      ++failed;
    }
  }
  if (failed) return {false, Fmt("%d unit suites fail, first ", failed) + first};
  return {true, Fmt("%zu oracle values regenerate, are read by unit tests, "
                    "and %zu unit suites pass",
                    frozen.size(), std::size({THA_UNIT_BINARIES}))};
}

}  // namespace
}  // namespace tha

int main(int argc, char** argv) {
  using namespace tha;
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  std::string mnist_flag;
  app.add_option("--only", only, "criteria to run (default all)")
      ->check(CLI::Range(1, 10));
  app.add_option("--mnist-dir", mnist_flag, "MNIST IDX directory");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());
  const std::string mnist_dir = MnistDir(mnist_flag);

  Runs runs;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> checks = {
      {"spike timing", [&] { return SpikeTiming(runs); }},
      {"dead-regime control", [&] { return DeadControl(runs); }},
      {"superiority over controls", [&] { return Superiority(runs); }},
      {"threshold convergence", [&] { return Convergence(runs); }},
      {"gradient oracle", GradientOracle},
      {"clamp contract", ClampContract},
      {"dead-neuron direction", DeadDirection},
      {"mnist desk-scale", [&] { return MnistComparison(mnist_dir); }},
      {"determinism", [&] { return Determinism(mnist_dir); }},
      {"analytic unit suite", AnalyticSuite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    Verdict v;
    try {
      v = checks[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("CRITERION %d %s: %s (%s)\n", id, checks[i].first,
                v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
