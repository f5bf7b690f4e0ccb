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

#include "tha/config.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "tha/errors.h"

namespace tha {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ToDouble(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  return d;
}

std::uint64_t ToUint(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v[0] == '-')
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE)
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return n;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<std::uint64_t> ToUintList(const std::string& key,
                                      const std::string& v) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ToUint(key, Trim(item)));
  return out;
}

std::string JoinList(const std::vector<std::uint64_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

template <typename E>
E ToEnum(const std::string& key, const std::string& v,
         const std::vector<std::pair<std::string, E>>& names) {
  std::string allowed;
  for (const auto& [name, e] : names) {
    if (name == v) return e;
    allowed += (allowed.empty() ? "" : "|") + name;
  }
  throw ConfigError(key, "expected one of " + allowed + ", got '" + v + "'");
}

template <typename E>
std::string EnumName(E e, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [name, x] : names)
    if (x == e) return name;
  return "?";
}

const std::vector<std::pair<std::string, Experiment>> kExperiments{
    {"temporal", Experiment::kTemporal},
    {"mnist", Experiment::kMnist},
    {"sparse", Experiment::kSparse}};
const std::vector<std::pair<std::string, Mode>> kModes{
    {"full_precision", Mode::kFullPrecision},
    {"bsnn_fixed", Mode::kBsnnFixed},
    {"bsnn_anneal", Mode::kBsnnAnneal}};
const std::vector<std::pair<std::string, OptimizerKind>> kOptimizers{
    {"sgd_momentum", OptimizerKind::kSgdMomentum},
    {"adam", OptimizerKind::kAdam}};
const std::vector<std::pair<std::string, BoundMode>> kBoundModes{
    {"strict", BoundMode::kStrict}, {"lenient", BoundMode::kLenient}};
const std::vector<std::pair<std::string, CountLossForm>> kLossForms{
    {"count", CountLossForm::kCount}, {"per_step", CountLossForm::kPerStep}};
const std::vector<std::pair<std::string, ThetaRef>> kThetaRefs{
    {"current", ThetaRef::kCurrent}, {"final", ThetaRef::kFinal}};

// Scalar keys other than the architecture and the per-layer family.
struct Field {
  std::function<void(ExperimentConfig&, const std::string& key,
                     const std::string& value)>
      set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field UintField(T ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& k,
                   const std::string& v) {
            c.*member = static_cast<T>(ToUint(k, v));
          },
          [member](const ExperimentConfig& c) {
            return std::to_string(c.*member);
          }};
}

Field DoubleField(std::function<double&(ExperimentConfig&)> ref) {
  return {[ref](ExperimentConfig& c, const std::string& k,
                const std::string& v) { ref(c) = ToDouble(k, v); },
          [ref](const ExperimentConfig& c) {
            return FormatDouble(ref(const_cast<ExperimentConfig&>(c)));
          }};
}

Field BoolField(bool ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& k,
                   const std::string& v) { c.*member = ToBool(k, v); },
          [member](const ExperimentConfig& c) {
            return std::string(c.*member ? "true" : "false");
          }};
}

template <typename E>
Field EnumField(std::function<E&(ExperimentConfig&)> ref,
                const std::vector<std::pair<std::string, E>>& names) {
  return {[ref, &names](ExperimentConfig& c, const std::string& k,
                        const std::string& v) { ref(c) = ToEnum(k, v, names); },
          [ref, &names](const ExperimentConfig& c) {
            return EnumName(ref(const_cast<ExperimentConfig&>(c)), names);
          }};
}

Field OptionalLimit(std::optional<std::size_t> ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& k,
                   const std::string& v) {
            if (v == "none") {
              c.*member = std::nullopt;
            } else {
              c.*member = static_cast<std::size_t>(ToUint(k, v));
            }
          },
          [member](const ExperimentConfig& c) {
            const auto& x = c.*member;
            return x ? std::to_string(*x) : std::string("none");
          }};
}

const std::map<std::string, Field>& Fields() {
  static const std::map<std::string, Field> fields = [] {
    using C = ExperimentConfig;
    std::map<std::string, Field> f;
    f["preset"] = {[](C& c, const std::string&, const std::string& v) {
                     c.preset = v;
                   },
                   [](const C& c) { return c.preset; }};
    f["experiment"] = EnumField<Experiment>(
        [](C& c) -> Experiment& { return c.experiment; }, kExperiments);
    f["mode"] = EnumField<Mode>([](C& c) -> Mode& { return c.mode; }, kModes);
    f["steps"] = UintField(&C::steps);
    f["iterations"] = UintField(&C::iterations);
    f["epochs"] = UintField(&C::epochs);
    f["batch_size"] = UintField(&C::batch_size);
    f["seed"] = UintField(&C::seed);
    f["optimizer"] = EnumField<OptimizerKind>(
        [](C& c) -> OptimizerKind& { return c.optimizer.kind; }, kOptimizers);
    f["lr"] = DoubleField([](C& c) -> double& { return c.optimizer.lr; });
    f["momentum"] =
        DoubleField([](C& c) -> double& { return c.optimizer.momentum; });
    f["adam_beta1"] =
        DoubleField([](C& c) -> double& { return c.optimizer.beta1; });
    f["adam_beta2"] =
        DoubleField([](C& c) -> double& { return c.optimizer.beta2; });
    f["adam_eps"] = DoubleField([](C& c) -> double& { return c.optimizer.eps; });
    f["lr_period"] = UintField(&C::lr_period);
    f["grad_clip"] = BoolField(&C::grad_clip);
    f["grad_clip_norm"] =
        DoubleField([](C& c) -> double& { return c.grad_clip_norm; });
    f["weight_clip"] = BoolField(&C::weight_clip);
    f["threads"] = UintField(&C::threads);
    f["bound_mode"] = EnumField<BoundMode>(
        [](C& c) -> BoundMode& { return c.bound_mode; }, kBoundModes);
    f["record_wall_time"] = BoolField(&C::record_wall_time);
    f["loss.form"] = EnumField<CountLossForm>(
        [](C& c) -> CountLossForm& { return c.count_targets.form; },
        kLossForms);
    f["loss.correct_rate"] = DoubleField(
        [](C& c) -> double& { return c.count_targets.correct_rate; });
    f["loss.incorrect_rate"] = DoubleField(
        [](C& c) -> double& { return c.count_targets.incorrect_rate; });
    f["census.dead_epsilon"] =
        DoubleField([](C& c) -> double& { return c.dead_epsilon; });
    f["census.every"] = UintField(&C::census_every);
    f["temporal.t_spike"] = UintField(&C::t_spike);
    f["temporal.peak_scale"] =
        DoubleField([](C& c) -> double& { return c.peak_scale; });
    f["temporal.theta_ref"] = EnumField<ThetaRef>(
        [](C& c) -> ThetaRef& { return c.theta_ref; }, kThetaRefs);
    f["temporal.rate_max"] =
        DoubleField([](C& c) -> double& { return c.rate_max; });
    f["temporal.spike_window"] = UintField(&C::spike_window);
    f["temporal.log_iterations"] = {
        [](C& c, const std::string& k, const std::string& v) {
          c.log_iterations = ToUintList(k, v);
        },
        [](const C& c) { return JoinList(c.log_iterations); }};
    f["mnist.dir"] = {[](C& c, const std::string&, const std::string& v) {
                        c.mnist_dir = v;
                      },
                      [](const C& c) { return c.mnist_dir; }};
    f["mnist.limit_train"] = OptionalLimit(&C::limit_train);
    f["mnist.limit_test"] = OptionalLimit(&C::limit_test);
    f["sparse.hot_inputs"] = {
        [](C& c, const std::string& k, const std::string& v) {
          c.sparse.hot_inputs = ToUint(k, v);
        },
        [](const C& c) { return std::to_string(c.sparse.hot_inputs); }};
    f["sparse.hot_rate"] =
        DoubleField([](C& c) -> double& { return c.sparse.hot_rate; });
    f["sparse.base_rate"] =
        DoubleField([](C& c) -> double& { return c.sparse.base_rate; });
    f["sparse.train"] = {
        [](C& c, const std::string& k, const std::string& v) {
          c.sparse.train = ToUint(k, v);
        },
        [](const C& c) { return std::to_string(c.sparse.train); }};
    f["sparse.test"] = {
        [](C& c, const std::string& k, const std::string& v) {
          c.sparse.test = ToUint(k, v);
        },
        [](const C& c) { return std::to_string(c.sparse.test); }};
    f["out"] = {[](C& c, const std::string&, const std::string& v) {
                  c.out_dir = v;
                },
                [](const C& c) { return c.out_dir; }};
    return f;
  }();
  return fields;
}

const std::vector<std::string> kLayerKeys{"beta",   "dropout",   "k",
                                          "theta",  "theta0",    "theta_inf",
                                          "alpha"};

double& LayerField(LayerConfig& l, const std::string& name) {
  if (name == "beta") return l.beta;
  if (name == "dropout") return l.dropout;
  if (name == "k") return l.k;
  if (name == "theta") return l.theta;
  if (name == "theta0") return l.theta0;
  if (name == "theta_inf") return l.theta_inf;
  return l.alpha;
}

bool IsLayerField(const std::string& name) {
  for (const auto& k : kLayerKeys)
    if (k == name) return true;
  return false;
}

bool UsedByMode(const std::string& name, Mode mode) {
  const bool anneal_only =
      name == "theta0" || name == "theta_inf" || name == "alpha";
  if (mode == Mode::kBsnnAnneal) return name != "theta";
  return !anneal_only;
}

std::vector<std::size_t> ParseSizes(const std::string& v) {
  std::vector<std::size_t> sizes;
  for (std::uint64_t n : ToUintList("layers", v)) {
    if (n == 0) throw ConfigError("layers", "layer sizes must be positive");
    sizes.push_back(static_cast<std::size_t>(n));
  }
  if (sizes.size() < 2)
    throw ConfigError("layers", "need an input size and at least one layer");
  return sizes;
}

// Name of the key that supplied `field` for layer `l` (1-indexed).
std::string SourceKey(const ConfigMap& map, std::size_t l,
                      const std::string& field) {
  const std::string specific = "layer." + std::to_string(l) + "." + field;
  return map.count(specific) ? specific : field;
}

void Validate(const ExperimentConfig& c, const ConfigMap& map) {
  if (c.steps == 0) throw ConfigError("steps", "must be positive");
  if (c.batch_size == 0) throw ConfigError("batch_size", "must be positive");
  if (c.threads == 0) throw ConfigError("threads", "must be positive");
  if (c.optimizer.lr <= 0) throw ConfigError("lr", "must be positive");
  if (c.optimizer.momentum < 0 || c.optimizer.momentum >= 1)
    throw ConfigError("momentum", "must lie in [0, 1)");
  if (c.optimizer.beta1 < 0 || c.optimizer.beta1 >= 1)
    throw ConfigError("adam_beta1", "must lie in [0, 1)");
  if (c.optimizer.beta2 < 0 || c.optimizer.beta2 >= 1)
    throw ConfigError("adam_beta2", "must lie in [0, 1)");
  if (c.optimizer.eps <= 0) throw ConfigError("adam_eps", "must be positive");
  if (c.grad_clip_norm <= 0)
    throw ConfigError("grad_clip_norm", "must be positive");
  if (c.dead_epsilon < 0)
    throw ConfigError("census.dead_epsilon", "must be non-negative");
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const LayerConfig& l = c.layers[i];
    const std::size_t n = i + 1;
    if (l.beta < 0 || l.beta > 1)
      throw ConfigError(SourceKey(map, n, "beta"), "must lie in [0, 1]");
    if (l.dropout < 0 || l.dropout >= 1)
      throw ConfigError(SourceKey(map, n, "dropout"), "must lie in [0, 1)");
    if (l.k < 0) throw ConfigError(SourceKey(map, n, "k"), "must be >= 0");
    if (c.mode == Mode::kBsnnAnneal) {
      const std::string inf = SourceKey(map, n, "theta_inf");
      const std::string zero = SourceKey(map, n, "theta0");
      if (!(l.theta0 > 0))
        throw ConfigError(zero, "must be positive, got " +
                                    FormatDouble(l.theta0));
      if (!(l.theta_inf > l.theta0))
        throw ConfigError(inf + "," + zero,
                          inf + " (" + FormatDouble(l.theta_inf) +
                              ") must exceed " + zero + " (" +
                              FormatDouble(l.theta0) + ")");
      if (!(l.alpha > 0 && l.alpha <= 1))
        throw ConfigError(SourceKey(map, n, "alpha"), "must lie in (0, 1]");
    } else if (!(l.theta > 0)) {
      throw ConfigError(SourceKey(map, n, "theta"), "must be positive");
    }
  }
  switch (c.experiment) {
    case Experiment::kTemporal:
      if (c.t_spike == 0 || c.t_spike >= c.steps)
        throw ConfigError("temporal.t_spike", "must lie in (0, steps)");
      if (c.rate_max < 0 || c.rate_max > 1)
        throw ConfigError("temporal.rate_max", "must lie in [0, 1]");
      if (c.peak_scale <= 0)
        throw ConfigError("temporal.peak_scale", "must be positive");
      break;
    case Experiment::kMnist:
      if (c.sizes.front() != 784)
        throw ConfigError("layers", "mnist input size must be 784");
      if (c.sizes.back() != 10)
        throw ConfigError("layers", "mnist needs 10 output neurons");
      break;
    case Experiment::kSparse:
      if (c.sparse.hot_inputs > c.sizes.front())
        throw ConfigError("sparse.hot_inputs", "exceeds the input size");
      if (c.sparse.hot_rate < 0 || c.sparse.hot_rate > 1)
        throw ConfigError("sparse.hot_rate", "must lie in [0, 1]");
      if (c.sparse.base_rate < 0 || c.sparse.base_rate > 1)
        throw ConfigError("sparse.base_rate", "must lie in [0, 1]");
      if (c.sparse.train == 0 || c.sparse.test == 0)
        throw ConfigError("sparse.train", "train and test must be non-empty");
      break;
  }
}

}  // namespace

std::string ExperimentName(Experiment e) { return EnumName(e, kExperiments); }
std::string ModeName(Mode m) { return EnumName(m, kModes); }

ConfigMap ParseConfigText(const std::string& text) {
  ConfigMap map;
  std::stringstream ss(text);
  std::string line;
  for (int lineno = 1; std::getline(ss, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError("", where + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", where + ": empty key");
    if (!map.emplace(key, value).second)
      throw ConfigError(key, where + ": duplicate key");
  }
  return map;
}

ConfigMap LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{')
    return ParseConfigText(text);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", "invalid JSON in '" + path + "': " + e.what());
  }
  if (!doc.contains("config") || !doc["config"].is_object())
    throw ConfigError("config", "'" + path + "' has no \"config\" object");
  ConfigMap map;
  for (const auto& [key, value] : doc["config"].items()) {
    if (!value.is_string())
      throw ConfigError(key, "sidecar values must be strings");
    map[key] = value.get<std::string>();
  }
  return map;
}

const std::map<std::string, ConfigMap>& Presets() {
  static const std::map<std::string, ConfigMap> presets = [] {
    const ConfigMap temporal{{"experiment", "temporal"},
                             {"layers", "100,1000,1"},
                             {"steps", "100"},
                             {"iterations", "2000"},
                             {"optimizer", "sgd_momentum"},
                             {"momentum", "0.9"},
                             {"lr", "1e-3"},
                             {"lr_period", "0"},
                             {"k", "5"}};
    const ConfigMap mnist{{"experiment", "mnist"},
                          {"layers", "784,256,10"},
                          {"steps", "100"},
                          {"optimizer", "adam"},
                          {"batch_size", "32"},
                          {"epochs", "5"},
                          {"mnist.limit_train", "2000"},
                          {"mnist.limit_test", "1000"}};
    const ConfigMap sparse{{"experiment", "sparse"},
                           {"layers", "200,500,5"},
                           {"steps", "100"},
                           {"optimizer", "adam"},
                           {"batch_size", "25"},
                           {"epochs", "10"}};
    std::map<std::string, ConfigMap> p;
    p["flt32"] = Merge(temporal, {{"mode", "full_precision"},
                                  {"beta", "0.6"},
                                  {"theta", "2"}});
    p["fixed1"] = Merge(temporal, {{"mode", "bsnn_fixed"},
                                   {"beta", "0.15"},
                                   {"theta", "1"}});
    p["fixed50"] = Merge(temporal, {{"mode", "bsnn_fixed"},
                                    {"beta", "0.15"},
                                    {"theta", "50"}});
    p["proposed"] = Merge(temporal, {{"mode", "bsnn_anneal"},
                                     {"beta", "0.15"},
                                     {"theta0", "5"},
                                     {"theta_inf", "50"},
                                     {"alpha", "5e-3"}});
    // lr_period = 10 epochs of 63 iterations.
    const ConfigMap mnist_common{{"beta", "0.74"}, {"k", "1"},
                                 {"lr", "1e-3"}, {"lr_period", "630"},
                                 {"dropout", "0"}};
    p["mnist_fixed1"] = Merge(Merge(mnist, mnist_common),
                              {{"mode", "bsnn_fixed"}, {"theta", "1"}});
    p["mnist_anneal"] = Merge(Merge(mnist, mnist_common),
                              {{"mode", "bsnn_anneal"},
                               {"theta0", "15"},
                               {"theta_inf", "25"},
                               {"alpha", "3e-2"}});
    const ConfigMap sparse_common{{"beta", "0.9"}, {"k", "5"}, {"lr", "2e-3"}};
    p["sparse_anneal"] = Merge(Merge(sparse, sparse_common),
                               {{"mode", "bsnn_anneal"},
                                {"theta0", "1"},
                                {"theta_inf", "16"},
                                {"alpha", "4e-2"}});
    p["sparse_fixed"] = Merge(Merge(sparse, sparse_common),
                              {{"mode", "bsnn_fixed"}, {"theta", "16"}});
    for (auto& [name, map] : p) map["preset"] = name;
    return p;
  }();
  return presets;
}

ConfigMap PresetMap(const std::string& name) {
  const auto& p = Presets();
  const auto it = p.find(name);
  if (it == p.end()) {
    std::string names;
    for (const auto& [n, m] : p) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("preset", "unknown preset '" + name + "' (have " +
                                    names + ")");
  }
  return it->second;
}

ConfigMap Merge(const ConfigMap& base, const ConfigMap& over) {
  ConfigMap out = base;
  for (const auto& [k, v] : over) out[k] = v;
  return out;
}

ExperimentConfig FromMap(const ConfigMap& map) {
  ExperimentConfig c;
  if (const auto it = map.find("layers"); it != map.end())
    c.sizes = ParseSizes(it->second);
  const std::size_t num_layers = c.sizes.size() - 1;
  if (const auto it = map.find("mode"); it != map.end())
    c.mode = ToEnum("mode", it->second, kModes);

  // Global layer keys first, then layer.N overrides.
  LayerConfig base;
  std::map<std::size_t, std::map<std::string, std::string>> specific;
  const auto& fields = Fields();
  for (const auto& [key, value] : map) {
    if (key == "layers") continue;
    if (IsLayerField(key)) {
      if (!UsedByMode(key, c.mode))
        throw ConfigError(key, "not used by mode " + ModeName(c.mode));
      LayerField(base, key) = ToDouble(key, value);
      continue;
    }
    if (key.rfind("layer.", 0) == 0) {
      const auto dot = key.find('.', 6);
      const std::string index = key.substr(6, dot == std::string::npos
                                                  ? std::string::npos
                                                  : dot - 6);
      const std::string field =
          dot == std::string::npos ? "" : key.substr(dot + 1);
      const bool digits = !index.empty() &&
                          index.find_first_not_of("0123456789") ==
                              std::string::npos;
      if (!digits || !IsLayerField(field))
        throw ConfigError(key, "unknown key");
      const std::size_t n = std::stoul(index);
      if (n == 0 || n > num_layers)
        throw ConfigError(key, "layer index out of range 1.." +
                                   std::to_string(num_layers));
      if (!UsedByMode(field, c.mode))
        throw ConfigError(key, "not used by mode " + ModeName(c.mode));
      specific[n][field] = value;
      continue;
    }
    const auto f = fields.find(key);
    if (f == fields.end()) throw ConfigError(key, "unknown key");
    f->second.set(c, key, value);
  }
  c.layers.assign(num_layers, base);
  // The global dropout rate covers hidden layers only.
  c.layers.back().dropout = 0.0;
  for (const auto& [n, entries] : specific)
    for (const auto& [field, value] : entries)
      LayerField(c.layers[n - 1], field) =
          ToDouble("layer." + std::to_string(n) + "." + field, value);
  c.sparse.inputs = c.sizes.front();
  c.sparse.classes = c.sizes.back();
  c.sparse.steps = c.steps;
  Validate(c, map);
  return c;
}

ConfigMap ToMap(const ExperimentConfig& cfg) {
  ConfigMap map;
  for (const auto& [key, field] : Fields()) map[key] = field.get(cfg);
  map["layers"] = JoinList(
      std::vector<std::uint64_t>(cfg.sizes.begin(), cfg.sizes.end()));
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    LayerConfig l = cfg.layers[i];
    for (const auto& name : kLayerKeys) {
      if (!UsedByMode(name, cfg.mode)) continue;
      map["layer." + std::to_string(i + 1) + "." + name] =
          FormatDouble(LayerField(l, name));
    }
  }
  return map;
}

}  // namespace tha
