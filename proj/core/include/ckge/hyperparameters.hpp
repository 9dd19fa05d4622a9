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

#ifndef CKGE_HYPERPARAMETERS_HPP_
#define CKGE_HYPERPARAMETERS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace ckge {

enum class AlphaMode { kUniform, kInverseSize };

AlphaMode parse_alpha_mode(const std::string& name);
std::string alpha_mode_name(AlphaMode mode);

struct Hyperparameters {
  std::size_t dim = 32;
  double margin = 1.0;               // gamma of the hinge
  double lambda_obs = 1.0;           // observation precision
  std::optional<double> lambda_obs_relation;  // overrides lambda_obs for relations
  double lambda_init = 0.01;         // precision of a fresh prior
  double beta = 0.1;                 // weight of the precision-weighted anchor
  double tau = 0.5;                  // contrastive temperature
  std::size_t clusters = 16;
  double eta = 0.1;                  // centroid momentum
  AlphaMode alpha_mode = AlphaMode::kInverseSize;
  double learning_rate = 1e-2;
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  std::size_t negatives = 1;         // negatives per positive
  std::size_t reassign_every = 5;    // epochs between cluster reassignment
  bool normalize_entities = false;   // L2-normalise entity rows after each step
  std::size_t exact_betweenness_limit = 2000;
  std::size_t betweenness_pivots = 256;
  std::uint64_t seed = 0;

  double relation_lambda_obs() const { return lambda_obs_relation.value_or(lambda_obs); }

  // Throws ConfigError on the first violated constraint.
  void validate() const;
};

}  // namespace ckge

#endif  // CKGE_HYPERPARAMETERS_HPP_
