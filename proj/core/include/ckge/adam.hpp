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

#ifndef CKGE_ADAM_HPP_
#define CKGE_ADAM_HPP_

#include <cstdint>

#include "ckge/embedding_table.hpp"

namespace ckge::train {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moment rows, allocated lazily on first touch.
struct AdamMoments {
  EmbeddingTable first;
  EmbeddingTable second;

  explicit AdamMoments(std::size_t dim) : first(dim), second(dim) {}
};

// Bias-corrected Adam on the rows present in `grad` with at least one
// non-zero component; other rows and their moments are left alone. `step`
// is the 1-based global step count used for bias correction.
void adam_step(EmbeddingTable& params, const SparseGradient& grad, AdamMoments& moments,
               const AdamConfig& config, std::uint64_t step);

}  // namespace ckge::train

#endif  // CKGE_ADAM_HPP_
