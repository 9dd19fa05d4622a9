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

#ifndef CKGE_SCORING_HPP_
#define CKGE_SCORING_HPP_

#include <span>
#include <vector>

#include "ckge/embedding_table.hpp"
#include "ckge/types.hpp"

namespace ckge::train {

// ||h + r - t||_2; lower is more plausible.
double transe_score(std::span<const double> h, std::span<const double> r,
                    std::span<const double> t);

// Hinge max(0, margin + pos - neg).
double margin_loss(double pos, double neg, double margin);

struct TrainingPair {
  Triple positive;
  Triple negative;
};

struct KgeGradients {
  double loss = 0.0;
  std::size_t active = 0;  // hinge terms with a positive value
  SparseGradient entities;
  SparseGradient relations;
};

// Margin ranking loss summed over pairs, with row-sparse gradients. The
// gradient of ||x|| is x/||x||; at x = 0 the subgradient 0 is used.
KgeGradients kge_batch_gradients(std::span<const TrainingPair> batch, const EmbeddingTable& entities,
                                 const EmbeddingTable& relations, double margin);

}  // namespace ckge::train

#endif  // CKGE_SCORING_HPP_
