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

#ifndef THA_CHECKPOINT_H_
#define THA_CHECKPOINT_H_

#include <istream>
#include <ostream>
#include <string>

#include "tha/network.h"

namespace tha {

// Whole-network checkpoint:
//
//   magic "THAN", version (u32 LE = 1), precision (u32), layer count (u32)
//   per layer: beta, dropout, theta0, theta_inf, alpha, theta (f64 LE),
//              gamma (u64 LE), surrogate theta0, k (f64 LE),
//              then one weight record (see binarize.h)
//
// Latents are stored exactly, so training can resume bit-for-bit.
void WriteNetwork(std::ostream& out, const Network& net);
Network ReadNetwork(std::istream& in);

// File wrappers. SaveNetwork refuses to replace an existing file unless
// `force` (DataError kExists).
void SaveNetwork(const std::string& path, const Network& net,
                 bool force = false);
Network LoadNetwork(const std::string& path);

}  // namespace tha

#endif  // THA_CHECKPOINT_H_
