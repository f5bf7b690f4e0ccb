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

#include "tha/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "tha/errors.h"

namespace tha {

namespace fs = std::filesystem;

namespace {

std::vector<HistogramBucket> BuildHistogram(std::span<const double> means) {
  std::vector<HistogramBucket> h(kHistogramBuckets + 1);
  double max_mean = 0.0;
  for (double m : means) max_mean = std::max(max_mean, m);
  const double width = max_mean / static_cast<double>(kHistogramBuckets);
  for (std::size_t i = 0; i < kHistogramBuckets; ++i) {
    h[i + 1].low = width * static_cast<double>(i);
    h[i + 1].high = i + 1 == kHistogramBuckets
                        ? max_mean
                        : width * static_cast<double>(i + 1);
  }
  for (double m : means) {
    if (m == 0.0) {
      ++h[0].count;
      continue;
    }
    auto idx = static_cast<std::size_t>(std::ceil(m / width));
    idx = std::clamp<std::size_t>(idx, 1, kHistogramBuckets);
    ++h[idx].count;
  }
  return h;
}

}  // namespace

ActivityCensus Census(const Network& net, std::span<const Sample> samples,
                      const CensusOptions& opts) {
  return Census(
      net, samples.size(),
      [&](std::size_t i) { return samples[i].input; }, opts);
}

ActivityCensus Census(const Network& net, std::size_t count,
                      const InputFn& input, const CensusOptions& opts) {
  THA_REQUIRE(count > 0, "census needs at least one sample");
  THA_REQUIRE(opts.threads >= 1, "census needs at least one thread");
  const std::size_t num_layers = net.num_layers();
  const std::vector<Matrix> effective = net.AllEffectiveWeights();
  ForwardOptions fo;
  fo.threshold = ThresholdPolicy::kEvaluation;

  const std::size_t workers = std::min(opts.threads, count);
  std::vector<std::vector<std::vector<std::uint64_t>>> partial(workers);
  std::vector<std::size_t> steps(workers, 0);
  auto run = [&](std::size_t w) {
    auto& totals = partial[w];
    totals.resize(num_layers);
    for (std::size_t l = 0; l < num_layers; ++l)
      totals[l].assign(net.layer(l).size(), 0);
    for (std::size_t s = w; s < count; s += workers) {
      const Tape tape = Forward(net, effective, input(s), fo);
      steps[w] = tape.steps;
      for (std::size_t l = 0; l < num_layers; ++l) {
        const Matrix& z = tape.layers[l].spikes;
        for (std::size_t t = 0; t < z.rows(); ++t)
          for (std::size_t j = 0; j < z.cols(); ++j)
            totals[l][j] += z(t, j) != 0.0 ? 1 : 0;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
  }

  ActivityCensus c;
  c.samples = count;
  c.steps = steps[0];
  c.dead_epsilon = opts.dead_epsilon;
  c.layers.resize(num_layers);
  const double n_samples = static_cast<double>(count);
  for (std::size_t l = 0; l < num_layers; ++l) {
    LayerActivity& la = c.layers[l];
    const std::size_t n = net.layer(l).size();
    la.totals.assign(n, 0);
    for (const auto& p : partial)
      for (std::size_t j = 0; j < n; ++j) la.totals[j] += p[l][j];
    la.mean_spikes.resize(n);
    std::size_t dead = 0;
    for (std::size_t j = 0; j < n; ++j) {
      la.mean_spikes[j] = static_cast<double>(la.totals[j]) / n_samples;
      const bool is_dead =
          opts.dead_epsilon > 0.0
              ? la.mean_spikes[j] / static_cast<double>(c.steps) <=
                    opts.dead_epsilon
              : la.totals[j] == 0;
      dead += is_dead ? 1 : 0;
    }
    la.dead_fraction = static_cast<double>(dead) / static_cast<double>(n);
    la.histogram = BuildHistogram(la.mean_spikes);
  }
  return c;
}

double DeadFractionFromHistogram(const LayerActivity& layer) {
  std::size_t n = 0;
  for (const auto& b : layer.histogram) n += b.count;
  THA_REQUIRE(n > 0, "empty histogram");
  return static_cast<double>(layer.histogram.front().count) /
         static_cast<double>(n);
}

std::optional<double> DeadReduction(double dead_a, double dead_b) {
  if (dead_b <= 0.0) return std::nullopt;
  return (dead_b - dead_a) / dead_b;
}

std::vector<std::optional<double>> CompareCensus(const ActivityCensus& a,
                                                 const ActivityCensus& b) {
  THA_REQUIRE(a.layers.size() == b.layers.size(),
              "compare census: layer counts differ");
  std::vector<std::optional<double>> out;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    THA_REQUIRE(a.layers[l].totals.size() == b.layers[l].totals.size(),
                "compare census: layer " + std::to_string(l + 1) +
                    " sizes differ");
    out.push_back(
        DeadReduction(a.layers[l].dead_fraction, b.layers[l].dead_fraction));
  }
  return out;
}

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string FormatThresholds(const RunRecord& r) {
  std::ostringstream out;
  out << "iteration,layer,theta_gamma,bound_violations\n";
  for (const IterationRow& row : r.rows) {
    for (std::size_t l = 0; l < row.theta.size(); ++l) {
      const std::uint64_t v =
          l < row.layer_violations.size() ? row.layer_violations[l] : 0;
      out << row.iteration << ',' << l + 1 << ',' << Num(row.theta[l]) << ','
          << v << '\n';
    }
  }
  return out.str();
}

std::string FormatHistogram(const ActivityCensus& c) {
  std::ostringstream out;
  out << "layer,bucket_low,bucket_high,neuron_count\n";
  for (std::size_t l = 0; l < c.layers.size(); ++l) {
    for (const HistogramBucket& b : c.layers[l].histogram)
      out << l + 1 << ',' << Num(b.low) << ',' << Num(b.high) << ','
          << b.count << '\n';
  }
  return out.str();
}

std::string FormatTraces(const RunRecord& r) {
  std::ostringstream out;
  out << "iteration,t,u,target,spike\n";
  for (const TraceSnapshot& s : r.traces) {
    for (std::size_t t = 0; t < s.u.size(); ++t) {
      out << s.iteration << ',' << t << ',' << Num(s.u[t]) << ','
          << (t < s.target.size() ? Num(s.target[t]) : std::string()) << ','
          << (t < s.spikes.size() ? Num(s.spikes[t]) : std::string()) << '\n';
    }
  }
  return out.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError(DataError::Kind::kIo, "cannot write " + path.string());
  }
  out << text;
  out.close();
  if (!out) {
    throw DataError(DataError::Kind::kIo, "write failed for " + path.string());
  }
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseDouble(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(DataError::Kind::kFormat,
                    "run csv line " + std::to_string(line) +
                        ": not a number: '" + s + "'");
  }
}

std::uint64_t ParseUint(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(DataError::Kind::kFormat,
                    "run csv line " + std::to_string(line) +
                        ": not an integer: '" + s + "'");
  }
}

}  // namespace

std::vector<std::string> RunCsvHeader(std::size_t layers) {
  std::vector<std::string> h{"iteration", "epoch", "lr", "loss"};
  for (const char* name : {"theta_gamma_", "spike_rate_", "dead_fraction_"})
    for (std::size_t l = 1; l <= layers; ++l)
      h.push_back(name + std::to_string(l));
  h.push_back("bound_violation_count");
  h.push_back("wall_ms");
  return h;
}

std::string FormatRunCsv(const RunRecord& r) {
  std::ostringstream out;
  const auto header = RunCsvHeader(r.num_layers);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  for (const IterationRow& row : r.rows) {
    THA_REQUIRE(row.theta.size() == r.num_layers &&
                    row.spike_rate.size() == r.num_layers &&
                    row.dead_fraction.size() == r.num_layers,
                "run record row " + std::to_string(row.iteration) +
                    " does not match the layer count");
    out << row.iteration << ',' << row.epoch << ',' << Num(row.lr) << ','
        << Num(row.loss);
    for (double v : row.theta) out << ',' << Num(v);
    for (double v : row.spike_rate) out << ',' << Num(v);
    for (const auto& v : row.dead_fraction)
      out << ',' << (v ? Num(*v) : std::string());
    out << ',' << row.bound_violations << ',' << Num(row.wall_ms) << '\n';
  }
  return out.str();
}

std::vector<IterationRow> ParseRunCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(DataError::Kind::kFormat, "run csv: missing header");
  }
  const auto header = SplitCsv(line);
  if (header.size() < 6 || (header.size() - 6) % 3 != 0) {
    throw DataError(DataError::Kind::kFormat, "run csv: malformed header");
  }
  const std::size_t layers = (header.size() - 6) / 3;
  if (header != RunCsvHeader(layers)) {
    throw DataError(DataError::Kind::kFormat, "run csv: unexpected columns");
  }
  std::vector<IterationRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() != header.size()) {
      throw DataError(DataError::Kind::kFormat,
                      "run csv line " + std::to_string(line_no) + ": expected " +
                          std::to_string(header.size()) + " cells, got " +
                          std::to_string(cells.size()));
    }
    IterationRow row;
    std::size_t c = 0;
    row.iteration = ParseUint(cells[c++], line_no);
    row.epoch = ParseUint(cells[c++], line_no);
    row.lr = ParseDouble(cells[c++], line_no);
    row.loss = ParseDouble(cells[c++], line_no);
    for (std::size_t l = 0; l < layers; ++l)
      row.theta.push_back(ParseDouble(cells[c++], line_no));
    for (std::size_t l = 0; l < layers; ++l)
      row.spike_rate.push_back(ParseDouble(cells[c++], line_no));
    for (std::size_t l = 0; l < layers; ++l) {
      const std::string& cell = cells[c++];
      row.dead_fraction.push_back(
          cell.empty() ? std::nullopt
                       : std::optional<double>(ParseDouble(cell, line_no)));
    }
    row.bound_violations = ParseUint(cells[c++], line_no);
    row.wall_ms = ParseDouble(cells[c++], line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json CensusJson(const ActivityCensus& census) {
  nlohmann::json j;
  j["samples"] = census.samples;
  j["steps"] = census.steps;
  j["dead_epsilon"] = census.dead_epsilon;
  j["layers"] = nlohmann::json::array();
  for (const LayerActivity& la : census.layers) {
    double mean = 0.0;
    for (double m : la.mean_spikes) mean += m;
    mean /= static_cast<double>(la.mean_spikes.size());
    j["layers"].push_back({{"neurons", la.mean_spikes.size()},
                           {"dead_fraction", la.dead_fraction},
                           {"mean_spike_count", mean}});
  }
  return j;
}

EmittedFiles EmitRun(const RunRecord& record, const std::string& dir,
                     const std::string& stem, bool force) {
  THA_REQUIRE(!record.rows.empty() || record.census,
              "refusing to emit an empty run record");
  THA_REQUIRE(!stem.empty(), "run record needs a file stem");
  const fs::path base(dir);
  EmittedFiles files;
  if (!record.rows.empty()) {
    files.csv = (base / (stem + ".csv")).string();
    files.thresholds = (base / (stem + "_thresholds.csv")).string();
  }
  if (record.census) files.histogram = (base / (stem + "_hist.csv")).string();
  if (!record.traces.empty())
    files.traces = (base / (stem + "_traces.csv")).string();
  files.sidecar = (base / (stem + ".json")).string();

  const std::string csv = FormatRunCsv(record);
  if (!force) {
    for (const std::string& p : {files.csv, files.thresholds, files.histogram,
                                 files.traces, files.sidecar}) {
      if (!p.empty() && fs::exists(p)) {
        throw DataError(DataError::Kind::kExists,
                        p + " exists (pass --force to overwrite)");
      }
    }
  }
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) {
    throw DataError(DataError::Kind::kIo,
                    "cannot create " + base.string() + ": " + ec.message());
  }

  nlohmann::json side;
  side["experiment"] = record.experiment;
  side["preset"] = record.preset;
  side["seed"] = record.seed;
  side["config"] = record.config;
  side["results"] = record.results;
  side["census"] = record.census ? CensusJson(*record.census) : nlohmann::json();
  side["files"] = nlohmann::json::object();
  if (!files.csv.empty()) {
    side["files"]["csv"] = fs::path(files.csv).filename().string();
    side["files"]["thresholds"] =
        fs::path(files.thresholds).filename().string();
  }
  if (!files.histogram.empty())
    side["files"]["histogram"] = fs::path(files.histogram).filename().string();
  if (!files.traces.empty())
    side["files"]["traces"] = fs::path(files.traces).filename().string();

  if (!files.csv.empty()) {
    WriteFile(files.csv, csv);
    WriteFile(files.thresholds, FormatThresholds(record));
  }
  if (!files.histogram.empty())
    WriteFile(files.histogram, FormatHistogram(*record.census));
  if (!files.traces.empty()) WriteFile(files.traces, FormatTraces(record));
  WriteFile(files.sidecar, side.dump(2) + "\n");
  return files;
}

}  // namespace tha
