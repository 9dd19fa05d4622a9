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

#ifndef CKGE_KG_CORE_HPP_
#define CKGE_KG_CORE_HPP_

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ckge/types.hpp"

namespace ckge::kg {

inline constexpr SnapshotIndex kNeverSeen = std::numeric_limits<SnapshotIndex>::max();
inline constexpr int kNegativeRetryBound = 100;

// Name <-> id bimaps for entities and relations. Ids are assigned in
// first-seen order unless the vocabulary was seeded from mapping files.
class Vocabulary {
 public:
  EntityId intern_entity(std::string_view name, SnapshotIndex seen_at);
  RelationId intern_relation(std::string_view name, SnapshotIndex seen_at);

  // Adds a name with a caller-chosen id (mapping files). Ids must end up dense.
  void define_entity(std::string_view name, EntityId id);
  void define_relation(std::string_view name, RelationId id);
  // Once sealed, interning an unknown name throws ConsistencyError.
  void seal_entities() { entities_sealed_ = true; }
  void seal_relations() { relations_sealed_ = true; }

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;
  const std::string& entity_name(EntityId id) const;
  const std::string& relation_name(RelationId id) const;

  std::size_t entity_count() const { return entity_names_.size(); }
  std::size_t relation_count() const { return relation_names_.size(); }

  SnapshotIndex entity_first_seen(EntityId id) const { return entity_first_seen_.at(id); }
  SnapshotIndex relation_first_seen(RelationId id) const { return relation_first_seen_.at(id); }

  // Hash over names in id order; checkpoints carry it to detect mismatched data.
  std::string fingerprint() const;

  // Verifies both bimaps are dense and mutually inverse.
  void check_dense() const;

 private:
  static std::uint32_t intern(std::string_view name, SnapshotIndex seen_at,
                              std::vector<std::string>& names,
                              std::unordered_map<std::string, std::uint32_t>& index,
                              std::vector<SnapshotIndex>& first_seen, bool sealed,
                              const char* kind);
  static void define(std::string_view name, std::uint32_t id, std::vector<std::string>& names,
                     std::unordered_map<std::string, std::uint32_t>& index,
                     std::vector<SnapshotIndex>& first_seen, const char* kind);

  std::vector<std::string> entity_names_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, EntityId> entity_index_;
  std::unordered_map<std::string, RelationId> relation_index_;
  std::vector<SnapshotIndex> entity_first_seen_;
  std::vector<SnapshotIndex> relation_first_seen_;
  bool entities_sealed_ = false;
  bool relations_sealed_ = false;
};

// One evolution step. `entities` and `relations` are cumulative and sorted;
// the split lists hold the triples stored in this snapshot's files.
struct Snapshot {
  SnapshotIndex index = 0;
  std::vector<EntityId> entities;
  std::vector<RelationId> relations;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
};

struct SnapshotStats {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t triples = 0;  // train + valid + test of this snapshot
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};

enum class Split { kTrain, kValid, kTest };

struct SnapshotSequence {
  Vocabulary vocab;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;

  std::size_t size() const { return snapshots.size(); }
  const Snapshot& at(SnapshotIndex t) const;
  SnapshotStats stats(SnapshotIndex t) const;

  // Union of the requested splits over snapshots 0..t.
  TripleSet cumulative_triples(SnapshotIndex t, std::span<const Split> splits) const;
  TripleSet cumulative_triples(SnapshotIndex t) const;  // all splits

  // Throws InvariantError/ConsistencyError when any snapshot invariant fails.
  void validate(bool permissive_relations = true) const;
};

struct LoadOptions {
  // Allow relations first seen after snapshot 0.
  bool permissive_relations = true;
  // Reject valid/test triples whose entities or relation never occur in a
  // training split up to the same snapshot.
  bool strict_splits = true;
};

// Reads snapshot_0..snapshot_N (or 0..N) each holding train/valid/test.txt.
SnapshotSequence load_snapshot_sequence(const std::filesystem::path& root,
                                        const LoadOptions& options = {});

// Writes the layout read by load_snapshot_sequence plus entity2id.txt and
// relation2id.txt so ids survive the round trip.
void write_snapshot_sequence(const SnapshotSequence& seq, const std::filesystem::path& root);

struct Delta {
  std::vector<EntityId> new_entities;
  std::vector<Triple> new_triples;
};

// Entities in E_t \ E_{t-1} and training triples of snapshot t that were not
// present in any split of an earlier snapshot. t must be >= 1.
Delta delta_sets(const SnapshotSequence& seq, SnapshotIndex t);

// Training triples for snapshot t: all of snapshot 0's train split at t = 0,
// the delta afterwards.
std::vector<Triple> training_triples(const SnapshotSequence& seq, SnapshotIndex t);

// Corrupts head or tail (fair coin) with a uniformly drawn candidate,
// resampling while the corruption is a known triple. After the retry bound
// the last draw is returned as is.
Triple sample_negative(const Triple& positive, std::span<const EntityId> candidates,
                       const TripleSet& known, std::mt19937_64& rng);

}  // namespace ckge::kg

#endif  // CKGE_KG_CORE_HPP_
