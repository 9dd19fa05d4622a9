/* Copyright 2026 The ckge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ckge/adam.hpp"

#include <algorithm>
#include <cmath>

#include "ckge/error.hpp"

namespace ckge::train {

void adam_step(EmbeddingTable& params, const SparseGradient& grad, AdamMoments& moments,
               const AdamConfig& config, std::uint64_t step) {
  if (step == 0) throw ConfigError("adam_step: step count is 1-based");
  if (grad.dim() != params.dim()) throw ConfigError("adam_step: dimension mismatch");
  const double t = static_cast<double>(step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  const auto& ids = grad.ids();
  for (std::size_t s = 0; s < ids.size(); ++s) {
    const auto g = grad.row_at(s);
    if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) continue;
    const auto id = ids[s];
    if (!moments.first.contains(id)) {
      moments.first.add(id);
      moments.second.add(id);
    }
    auto p = params.row(id);
    auto m = moments.first.row(id);
    auto v = moments.second.row(id);
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

}  // namespace ckge::train
