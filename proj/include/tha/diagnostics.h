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

#ifndef THA_DIAGNOSTICS_H_
#define THA_DIAGNOSTICS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tha/network.h"
#include "tha/tasks.h"
#include "tha/train.h"

namespace tha {

struct HistogramBucket {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;

  friend bool operator==(const HistogramBucket&,
                         const HistogramBucket&) = default;
};

inline constexpr std::size_t kHistogramBuckets = 20;

struct LayerActivity {
  std::vector<std::uint64_t> totals;  // spikes per neuron over the set
  std::vector<double> mean_spikes;    // totals / samples
  double dead_fraction = 0.0;
  // buckets[0] is the exact-zero bucket [0, 0]; then kHistogramBuckets
  // equal-width buckets (low, high] covering (0, max mean].
  std::vector<HistogramBucket> histogram;

  friend bool operator==(const LayerActivity&, const LayerActivity&) = default;
};

struct ActivityCensus {
  std::size_t samples = 0;
  std::size_t steps = 0;
  double dead_epsilon = 0.0;
  std::vector<LayerActivity> layers;

  friend bool operator==(const ActivityCensus&,
                         const ActivityCensus&) = default;
};

struct CensusOptions {
  // A neuron is dead when its mean rate (spikes per step) is <= epsilon;
  // 0 means no spike at all over the whole set.
  double dead_epsilon = 0.0;
  std::size_t threads = 1;
};

// Evaluation-mode forward passes (no dropout, test-time thresholds) over
// every sample. Throws ContractError on an empty set.
ActivityCensus Census(const Network& net, std::span<const Sample> samples,
                      const CensusOptions& opts = {});
// Same, with inputs produced on demand (must be safe to call concurrently).
using InputFn = std::function<Matrix(std::size_t)>;
ActivityCensus Census(const Network& net, std::size_t count,
                      const InputFn& input, const CensusOptions& opts = {});

// Dead fraction recovered from the zero bucket of the histogram.
double DeadFractionFromHistogram(const LayerActivity& layer);

// Relative dead-neuron reduction of `a` against the baseline `b` per layer,
// (dead_b - dead_a) / dead_b, or nullopt when dead_b is zero. Throws
// ContractError when the layer shapes differ.
std::vector<std::optional<double>> CompareCensus(const ActivityCensus& a,
                                                 const ActivityCensus& b);
std::optional<double> DeadReduction(double dead_a, double dead_b);

// Output-layer membrane trace captured at a logging iteration.
struct TraceSnapshot {
  std::uint64_t iteration = 0;
  std::vector<double> u;
  std::vector<double> target;
  std::vector<double> spikes;

  friend bool operator==(const TraceSnapshot&, const TraceSnapshot&) = default;
};

struct RunRecord {
  std::string experiment;
  std::string preset;
  std::uint64_t seed = 0;
  std::size_t num_layers = 0;
  nlohmann::json config = nlohmann::json::object();   // resolved key=value
  nlohmann::json results = nlohmann::json::object();  // experiment summary
  std::vector<IterationRow> rows;
  std::optional<ActivityCensus> census;
  std::vector<TraceSnapshot> traces;
};

struct EmittedFiles {
  std::string csv;         // empty without rows
  std::string thresholds;  // empty without rows
  std::string histogram;  // empty without a census
  std::string traces;     // empty without traces
  std::string sidecar;
};

// Writes <dir>/<stem>.csv (one row per iteration), <stem>_thresholds.csv,
// <stem>_hist.csv, <stem>_traces.csv and the <stem>.json sidecar; files
// without content (no rows, census or traces) are skipped. Refuses to
// replace existing files unless `force` (DataError kExists); a record with
// neither rows nor census is a ContractError. Nothing is written in either
// case.
EmittedFiles EmitRun(const RunRecord& record, const std::string& dir,
                     const std::string& stem, bool force = false);

// Column names of the per-iteration CSV for `layers` layers.
std::vector<std::string> RunCsvHeader(std::size_t layers);
std::string FormatRunCsv(const RunRecord& record);
// Parses a per-iteration CSV written by EmitRun. Throws DataError kFormat.
std::vector<IterationRow> ParseRunCsv(const std::string& text);

nlohmann::json CensusJson(const ActivityCensus& census);

}  // namespace tha

#endif  // THA_DIAGNOSTICS_H_
