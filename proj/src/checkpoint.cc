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

#include "tha/checkpoint.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "tha/byteio.h"
#include "tha/errors.h"

namespace tha {
namespace {

constexpr char kMagic[4] = {'T', 'H', 'A', 'N'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void WriteNetwork(std::ostream& out, const Network& net) {
  using namespace byteio;
  out.write(kMagic, 4);
  PutU32Le(out, kVersion);
  PutU32Le(out, net.precision() == Precision::kBinarized ? 1 : 0);
  PutU32Le(out, static_cast<std::uint32_t>(net.num_layers()));
  for (const Layer& l : net.layers()) {
    PutF64Le(out, l.beta);
    PutF64Le(out, l.dropout);
    PutF64Le(out, l.threshold.theta0());
    PutF64Le(out, l.threshold.theta_inf());
    PutF64Le(out, l.threshold.alpha());
    PutF64Le(out, l.threshold.theta());
    PutU64Le(out, l.threshold.gamma());
    PutF64Le(out, l.surrogate.theta0);
    PutF64Le(out, l.surrogate.k);
    WriteWeights(out, l.weights, WeightEncoding::kLatent);
  }
  if (!out) throw DataError(DataError::Kind::kIo, "network write failed");
}

Network ReadNetwork(std::istream& in) {
  using namespace byteio;
  char magic[4];
  ReadExact(in, magic, 4, "network magic");
  if (!std::equal(magic, magic + 4, kMagic))
    throw DataError(DataError::Kind::kBadMagic, "not a network checkpoint");
  const std::uint32_t version = GetU32Le(in, "network version");
  if (version != kVersion)
    throw DataError(DataError::Kind::kFormat,
                    "unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t precision = GetU32Le(in, "network precision");
  if (precision > 1)
    throw DataError(DataError::Kind::kFormat, "bad precision field");
  const std::uint32_t count = GetU32Le(in, "layer count");
  if (count == 0) throw DataError(DataError::Kind::kFormat, "no layers");
  std::vector<Layer> layers;
  for (std::uint32_t i = 0; i < count; ++i) {
    Layer l;
    l.beta = GetF64Le(in, "beta");
    l.dropout = GetF64Le(in, "dropout");
    const double theta0 = GetF64Le(in, "theta0");
    const double theta_inf = GetF64Le(in, "theta_inf");
    const double alpha = GetF64Le(in, "alpha");
    const double theta = GetF64Le(in, "theta");
    const std::uint64_t gamma = GetU64Le(in, "gamma");
    l.surrogate.theta0 = GetF64Le(in, "surrogate theta0");
    l.surrogate.k = GetF64Le(in, "surrogate k");
    try {
      l.threshold = AnnealSchedule(theta0, theta_inf, alpha);
      l.threshold.Restore(theta, gamma);
    } catch (const ContractError& e) {
      throw DataError(DataError::Kind::kFormat,
                      std::string("bad threshold schedule: ") + e.what());
    }
    l.weights = ReadWeights(in);
    layers.push_back(std::move(l));
  }
  try {
    return Network(precision == 1 ? Precision::kBinarized : Precision::kFull,
                   std::move(layers));
  } catch (const ContractError& e) {
    throw DataError(DataError::Kind::kFormat,
                    std::string("inconsistent layers: ") + e.what());
  }
}

void SaveNetwork(const std::string& path, const Network& net, bool force) {
  if (!force && std::filesystem::exists(path))
    throw DataError(DataError::Kind::kExists,
                    "refusing to overwrite '" + path + "' (use --force)");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(DataError::Kind::kIo, "cannot write '" + path + "'");
  WriteNetwork(out, net);
}

Network LoadNetwork(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataError::Kind::kIo, "cannot open '" + path + "'");
  return ReadNetwork(in);
}

}  // namespace tha
