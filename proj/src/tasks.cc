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

#include "tha/tasks.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "tha/byteio.h"
#include "tha/errors.h"

namespace tha {

Matrix PoissonEncode(std::span<const double> rates, std::size_t steps,
                     Rng& rng) {
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ContractError("poisson rate " + std::to_string(r) +
                          " outside [0, 1]");
    }
  }
  Matrix out(steps, rates.size());
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t i = 0; i < rates.size(); ++i)
      out(t, i) = rng.Uniform() < rates[i] ? 1.0 : 0.0;
  return out;
}

Matrix TriangularTarget(const TriangularTargetSpec& spec) {
  if (spec.t_spike == 0 || spec.t_spike >= spec.steps) {
    throw ContractError("triangular target: t_spike " +
                        std::to_string(spec.t_spike) + " not in (0, " +
                        std::to_string(spec.steps) + ")");
  }
  Matrix y(spec.steps, 1);
  const double peak = spec.peak_scale * spec.theta_ref;
  for (std::size_t t = 0; t <= spec.t_spike; ++t) {
    y(t, 0) = peak * static_cast<double>(t) / static_cast<double>(spec.t_spike);
  }
  return y;
}

Matrix StaticCurrent(std::span<const double> image, std::size_t steps) {
  Matrix out(steps, image.size());
  for (std::size_t t = 0; t < steps; ++t)
    std::copy(image.begin(), image.end(), out.row(t).begin());
  return out;
}

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::ifstream OpenBinary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataError::Kind::kIo, "cannot open " + path);
  return in;
}

std::uint32_t ReadHeaderWord(std::istream& in, const std::string& path) {
  try {
    return byteio::GetU32Be(in, "idx header");
  } catch (const DataError&) {
    throw DataError(DataError::Kind::kTruncated, path + ": truncated header");
  }
}

}  // namespace

MnistSet LoadMnistIdx(const std::string& images_path,
                      const std::string& labels_path,
                      std::optional<std::size_t> limit, std::string split) {
  std::ifstream img = OpenBinary(images_path);
  std::ifstream lab = OpenBinary(labels_path);

  const std::uint32_t img_magic = ReadHeaderWord(img, images_path);
  if (img_magic != kImageMagic) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", img_magic);
    throw DataError(DataError::Kind::kBadMagic,
                    images_path + ": bad image magic " + buf);
  }
  const std::uint32_t lab_magic = ReadHeaderWord(lab, labels_path);
  if (lab_magic != kLabelMagic) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", lab_magic);
    throw DataError(DataError::Kind::kBadMagic,
                    labels_path + ": bad label magic " + buf);
  }
  const std::uint32_t n_images = ReadHeaderWord(img, images_path);
  const std::uint32_t rows = ReadHeaderWord(img, images_path);
  const std::uint32_t cols = ReadHeaderWord(img, images_path);
  const std::uint32_t n_labels = ReadHeaderWord(lab, labels_path);
  if (n_images != n_labels) {
    throw DataError(DataError::Kind::kCountMismatch,
                    images_path + " holds " + std::to_string(n_images) +
                        " images but " + labels_path + " holds " +
                        std::to_string(n_labels) + " labels");
  }

  std::size_t count = n_images;
  if (limit) count = std::min<std::size_t>(count, *limit);
  const std::size_t pixels = std::size_t{rows} * cols;

  MnistSet set;
  set.rows = rows;
  set.cols = cols;
  set.split = std::move(split);
  set.images = Matrix(count, pixels);
  set.labels.resize(count);

  std::vector<unsigned char> buf(pixels * count);
  img.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(img.gcount()) != buf.size()) {
    throw DataError(DataError::Kind::kTruncated,
                    images_path + ": truncated pixel data");
  }
  for (std::size_t i = 0; i < buf.size(); ++i)
    set.images.flat()[i] = static_cast<double>(buf[i]) / 255.0;

  lab.read(reinterpret_cast<char*>(set.labels.data()),
           static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(lab.gcount()) != count) {
    throw DataError(DataError::Kind::kTruncated,
                    labels_path + ": truncated label data");
  }
  return set;
}

void WriteMnistIdx(const MnistSet& set, const std::string& images_path,
                   const std::string& labels_path) {
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  if (!img || !lab) {
    throw DataError(DataError::Kind::kIo,
                    "cannot write " + images_path + " / " + labels_path);
  }
  byteio::PutU32Be(img, kImageMagic);
  byteio::PutU32Be(img, static_cast<std::uint32_t>(set.size()));
  byteio::PutU32Be(img, static_cast<std::uint32_t>(set.rows));
  byteio::PutU32Be(img, static_cast<std::uint32_t>(set.cols));
  for (double v : set.images.flat()) {
    const auto b = static_cast<unsigned char>(
        std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    img.put(static_cast<char>(b));
  }
  byteio::PutU32Be(lab, kLabelMagic);
  byteio::PutU32Be(lab, static_cast<std::uint32_t>(set.size()));
  lab.write(reinterpret_cast<const char*>(set.labels.data()),
            static_cast<std::streamsize>(set.labels.size()));
  if (!img || !lab) {
    throw DataError(DataError::Kind::kIo,
                    "write failed for " + images_path + " / " + labels_path);
  }
}

SparseTask MakeSparseTask(const SparseTaskSpec& spec, std::uint64_t seed) {
  THA_REQUIRE(spec.classes >= 2 && spec.inputs >= spec.hot_inputs,
              "sparse task: bad shape");
  Rng rng(DeriveSeed(seed, 0x5A5A));
  SparseTask task;
  task.class_rates.assign(spec.classes,
                          std::vector<double>(spec.inputs, spec.base_rate));
  std::vector<std::size_t> idx(spec.inputs);
  for (auto& rates : task.class_rates) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates picks the hot subset.
    for (std::size_t i = 0; i < spec.hot_inputs; ++i) {
      const std::size_t k = i + rng.Below(spec.inputs - i);
      std::swap(idx[i], idx[k]);
      rates[idx[i]] = spec.hot_rate;
    }
  }
  auto draw = [&](std::size_t n, std::vector<Sample>& out) {
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t c = s % spec.classes;
      out.push_back({PoissonEncode(task.class_rates[c], spec.steps, rng),
                     static_cast<int>(c)});
    }
  };
  draw(spec.train, task.train);
  draw(spec.test, task.test);
  return task;
}

}  // namespace tha
