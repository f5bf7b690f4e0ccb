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

#ifndef THA_LOSS_H_
#define THA_LOSS_H_

#include <cstddef>

#include "tha/matrix.h"

namespace tha {

struct LossValue {
  double loss = 0.0;
  Matrix grad;  // same shape as the differentiated trace
};

// sum_t sum_j (y - u)^2, gradient -2 (y - u). Shapes must match.
LossValue MembraneMseLoss(const Matrix& u_trace, const Matrix& target);

enum class CountLossForm {
  kCount,    // sum_j (c_j - sum_t z)^2 with c_j = rate_j * T
  kPerStep,  // sum_j sum_t (rate_j - z_t)^2, the per-step reading
};

struct SpikeCountTargets {
  double correct_rate = 0.8;
  double incorrect_rate = 0.2;
  CountLossForm form = CountLossForm::kCount;
};

// `spikes` is T x classes. Throws ContractError if correct_class is out of
// range.
LossValue SpikeCountMseLoss(const Matrix& spikes, std::size_t correct_class,
                            const SpikeCountTargets& targets = {});

}  // namespace tha

#endif  // THA_LOSS_H_
