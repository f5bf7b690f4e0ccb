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

#include "tha/loss.h"

#include <string>

#include "tha/errors.h"

namespace tha {

LossValue MembraneMseLoss(const Matrix& u_trace, const Matrix& target) {
  if (u_trace.rows() != target.rows() || u_trace.cols() != target.cols()) {
    throw ContractError("membrane mse: trace has " +
                        std::to_string(u_trace.rows()) + " steps, target has " +
                        std::to_string(target.rows()));
  }
  LossValue out{0.0, Matrix(u_trace.rows(), u_trace.cols())};
  const auto u = u_trace.flat();
  const auto y = target.flat();
  auto g = out.grad.flat();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = y[i] - u[i];
    out.loss += e * e;
    g[i] = -2.0 * e;
  }
  return out;
}

LossValue SpikeCountMseLoss(const Matrix& spikes, std::size_t correct_class,
                            const SpikeCountTargets& targets) {
  const std::size_t steps = spikes.rows();
  const std::size_t classes = spikes.cols();
  if (correct_class >= classes) {
    throw ContractError("spike count loss: class " +
                        std::to_string(correct_class) + " out of range for " +
                        std::to_string(classes) + " outputs");
  }
  LossValue out{0.0, Matrix(steps, classes)};
  for (std::size_t j = 0; j < classes; ++j) {
    const double rate =
        j == correct_class ? targets.correct_rate : targets.incorrect_rate;
    if (targets.form == CountLossForm::kCount) {
      double count = 0.0;
      for (std::size_t t = 0; t < steps; ++t) count += spikes(t, j);
      const double e = rate * static_cast<double>(steps) - count;
      out.loss += e * e;
      for (std::size_t t = 0; t < steps; ++t) out.grad(t, j) = -2.0 * e;
    } else {
      for (std::size_t t = 0; t < steps; ++t) {
        const double e = rate - spikes(t, j);
        out.loss += e * e;
        out.grad(t, j) = -2.0 * e;
      }
    }
  }
  return out;
}

}  // namespace tha
