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

#ifndef THA_BINARIZE_H_
#define THA_BINARIZE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tha/matrix.h"
#include "tha/rng.h"

namespace tha {

// Full-precision latent weights owned by the optimizer. The forward pass of a
// binarized network reads a fresh sign view on every call; the latents are
// never overwritten by their binarized values.
class LatentWeightMatrix {
 public:
  LatentWeightMatrix() = default;
  LatentWeightMatrix(std::size_t rows, std::size_t cols, bool has_bias,
                     bool clip_enabled);

  // U(-sqrt(1/cols), +sqrt(1/cols)) for every latent entry and bias.
  static LatentWeightMatrix InitDense(std::size_t rows, std::size_t cols,
                                      Rng& rng, bool has_bias = true,
                                      bool clip_enabled = false);

  std::size_t rows() const { return latent_.rows(); }
  std::size_t cols() const { return latent_.cols(); }
  bool has_bias() const { return has_bias_; }
  bool clip_enabled() const { return clip_enabled_; }
  void set_clip_enabled(bool on) { clip_enabled_ = on; }

  Matrix& latent() { return latent_; }
  const Matrix& latent() const { return latent_; }
  // Empty when the matrix has no bias.
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

  // Entry-wise sign with sign(0) = +1. Entries are exactly -1 or +1.
  Matrix BinarizeView() const;

  // Clamps latents into [-1, 1]; no-op when clipping is disabled.
  void ClipLatent();

  friend bool operator==(const LatentWeightMatrix&,
                         const LatentWeightMatrix&) = default;

 private:
  Matrix latent_;
  std::vector<double> bias_;
  bool has_bias_ = false;
  bool clip_enabled_ = false;
};

// Clipped straight-through estimator: passes the gradient where
// |latent| <= 1, zero elsewhere.
Matrix SteBackward(const Matrix& grad_wrt_binary, const LatentWeightMatrix& m);

// Weight checkpoint records.
//
//   offset  size  field
//   0       4     magic "LWM1"
//   4       4     rows      (uint32 LE)
//   8       4     cols      (uint32 LE)
//   12      4     flags     (uint32 LE) bit0 clip, bit1 bias, bit2 packed
//   16      ...   payload
//
// Latent payload: rows*cols float64 LE, row-major. Packed payload: one bit
// per weight (1 = +1, 0 = -1), row-major, LSB-first within each byte, zero
// padded to a byte boundary. Either payload is followed by `rows` float64 LE
// bias values when bit1 is set.
enum class WeightEncoding { kLatent, kPackedSigns };

inline constexpr std::uint32_t kWeightFlagClip = 1u << 0;
inline constexpr std::uint32_t kWeightFlagBias = 1u << 1;
inline constexpr std::uint32_t kWeightFlagPacked = 1u << 2;

void WriteWeights(std::ostream& out, const LatentWeightMatrix& m,
                  WeightEncoding encoding = WeightEncoding::kLatent);
// Packed records load as latents of exactly -1/+1.
LatentWeightMatrix ReadWeights(std::istream& in);

// Row-major sign bits, LSB-first, zero padded.
std::vector<std::uint8_t> PackSigns(const LatentWeightMatrix& m);

}  // namespace tha

#endif  // THA_BINARIZE_H_
