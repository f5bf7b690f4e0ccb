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

#include "tha/binarize.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "tha/byteio.h"
#include "tha/errors.h"

namespace tha {

LatentWeightMatrix::LatentWeightMatrix(std::size_t rows, std::size_t cols,
                                       bool has_bias, bool clip_enabled)
    : latent_(rows, cols),
      bias_(has_bias ? rows : 0, 0.0),
      has_bias_(has_bias),
      clip_enabled_(clip_enabled) {
  THA_REQUIRE(rows >= 1 && cols >= 1, "weight matrix must be at least 1x1");
}

LatentWeightMatrix LatentWeightMatrix::InitDense(std::size_t rows,
                                                 std::size_t cols, Rng& rng,
                                                 bool has_bias,
                                                 bool clip_enabled) {
  LatentWeightMatrix m(rows, cols, has_bias, clip_enabled);
  const double bound = std::sqrt(1.0 / static_cast<double>(cols));
  for (double& w : m.latent_.values()) w = rng.Uniform(-bound, bound);
  for (double& b : m.bias_) b = rng.Uniform(-bound, bound);
  return m;
}

Matrix LatentWeightMatrix::BinarizeView() const {
  Matrix out(rows(), cols());
  const auto src = latent_.flat();
  auto dst = out.flat();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] >= 0.0 ? 1.0 : -1.0;
  return out;
}

void LatentWeightMatrix::ClipLatent() {
  if (!clip_enabled_) return;
  for (double& w : latent_.values()) w = std::clamp(w, -1.0, 1.0);
}

Matrix SteBackward(const Matrix& grad_wrt_binary, const LatentWeightMatrix& m) {
  THA_REQUIRE(grad_wrt_binary.rows() == m.rows() &&
                  grad_wrt_binary.cols() == m.cols(),
              "ste backward: gradient shape does not match weight shape");
  Matrix out(m.rows(), m.cols());
  const auto g = grad_wrt_binary.flat();
  const auto w = m.latent().flat();
  auto dst = out.flat();
  for (std::size_t i = 0; i < g.size(); ++i)
    dst[i] = std::fabs(w[i]) <= 1.0 ? g[i] : 0.0;
  return out;
}

std::vector<std::uint8_t> PackSigns(const LatentWeightMatrix& m) {
  const auto w = m.latent().flat();
  std::vector<std::uint8_t> bytes((w.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= 0.0) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return bytes;
}

namespace {
constexpr char kMagic[4] = {'L', 'W', 'M', '1'};
}  // namespace

void WriteWeights(std::ostream& out, const LatentWeightMatrix& m,
                  WeightEncoding encoding) {
  std::uint32_t flags = 0;
  if (m.clip_enabled()) flags |= kWeightFlagClip;
  if (m.has_bias()) flags |= kWeightFlagBias;
  if (encoding == WeightEncoding::kPackedSigns) flags |= kWeightFlagPacked;
  out.write(kMagic, 4);
  byteio::PutU32Le(out, static_cast<std::uint32_t>(m.rows()));
  byteio::PutU32Le(out, static_cast<std::uint32_t>(m.cols()));
  byteio::PutU32Le(out, flags);
  if (encoding == WeightEncoding::kPackedSigns) {
    const auto bytes = PackSigns(m);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    for (double w : m.latent().flat()) byteio::PutF64Le(out, w);
  }
  for (double b : m.bias()) byteio::PutF64Le(out, b);
}

LatentWeightMatrix ReadWeights(std::istream& in) {
  char magic[4];
  byteio::ReadExact(in, magic, 4, "weight magic");
  if (!std::equal(magic, magic + 4, kMagic)) {
    throw DataError(DataError::Kind::kBadMagic, "not a weight record");
  }
  const std::uint32_t rows = byteio::GetU32Le(in, "weight rows");
  const std::uint32_t cols = byteio::GetU32Le(in, "weight cols");
  const std::uint32_t flags = byteio::GetU32Le(in, "weight flags");
  if (rows == 0 || cols == 0 || (flags & ~7u) != 0) {
    throw DataError(DataError::Kind::kFormat, "bad weight record header");
  }
  LatentWeightMatrix m(rows, cols, (flags & kWeightFlagBias) != 0,
                       (flags & kWeightFlagClip) != 0);
  auto w = m.latent().flat();
  if (flags & kWeightFlagPacked) {
    std::vector<char> bytes((w.size() + 7) / 8);
    byteio::ReadExact(in, bytes.data(), bytes.size(), "packed signs");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool plus = (static_cast<unsigned char>(bytes[i / 8]) >> (i % 8)) & 1u;
      w[i] = plus ? 1.0 : -1.0;
    }
  } else {
    for (double& v : w) v = byteio::GetF64Le(in, "latent weights");
  }
  for (double& b : m.bias()) b = byteio::GetF64Le(in, "bias");
  return m;
}

}  // namespace tha
