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

#ifndef CKGE_SYNTHETIC_HPP_
#define CKGE_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ckge/kg_core.hpp"

namespace ckge::kg {

// Growth pattern of per-snapshot triple counts: constant, doubling, or
// halving. Mirrors the equal/higher/lower benchmark families.
enum class GrowthRegime { kEqual, kHigher, kLower };

GrowthRegime parse_regime(const std::string& name);
std::string regime_name(GrowthRegime regime);

struct SyntheticSpec {
  GrowthRegime regime = GrowthRegime::kEqual;
  std::size_t snapshots = 3;
  // Cumulative entity count per snapshot. Empty: grow linearly to final_entities.
  std::vector<std::size_t> entities;
  // Triples per snapshot (train + valid + test). Empty: derived from
  // base_triples and the regime.
  std::vector<std::size_t> triples;
  std::size_t final_entities = 500;
  std::size_t base_triples = 1000;
  std::size_t relations = 20;
  // Dimension of the hidden translational model the facts are drawn from.
  std::size_t latent_dim = 8;
  // Tails are drawn among this many nearest latent neighbours of head + relation.
  std::size_t tail_choices = 3;
  std::uint64_t seed = 0;
};

std::vector<std::size_t> planned_entity_counts(const SyntheticSpec& spec);
std::vector<std::size_t> planned_triple_counts(const SyntheticSpec& spec);

// Facts come from a hidden translational model: every entity and relation
// gets a latent vector and tails are picked among the nearest neighbours of
// head + relation. Each new entity appears in at least one training triple,
// and splits are 80/10/10 per snapshot.
SnapshotSequence generate_synthetic_sequence(const SyntheticSpec& spec);

}  // namespace ckge::kg

#endif  // CKGE_SYNTHETIC_HPP_
