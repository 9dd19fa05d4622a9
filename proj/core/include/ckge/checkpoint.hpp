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

#ifndef CKGE_CHECKPOINT_HPP_
#define CKGE_CHECKPOINT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "ckge/bayesian_store.hpp"
#include "ckge/run_config.hpp"
#include "ckge/types.hpp"

namespace ckge {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointMeta {
  int version = kCheckpointVersion;
  SnapshotIndex snapshot = 0;
  std::string vocabulary;            // Vocabulary::fingerprint()
  std::vector<Setting> hyperparameters;
};

struct Checkpoint {
  CheckpointMeta meta;
  bayes::BayesianStore store;
};

// Text format, one id per line with shortest round-trip decimals, closed by
// a checksum line over everything above it:
//
//   ckge-checkpoint 1
//   snapshot <t>
//   vocabulary <fingerprint>
//   dim <d>
//   hp <key> <value>            (repeated)
//   entities <count>
//   <id> <mean x d> <precision x d>
//   relations <count>
//   ...
//   checksum <fnv1a-64 hex>
void save_checkpoint(const std::filesystem::path& path, const bayes::BayesianStore& store,
                     const CheckpointMeta& meta);

// Throws DataError on a missing, truncated or corrupted file.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ckge

#endif  // CKGE_CHECKPOINT_HPP_
