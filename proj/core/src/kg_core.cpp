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

#include "ckge/kg_core.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "ckge/error.hpp"
#include "ckge/hash.hpp"

namespace ckge::kg {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Vocabulary

std::uint32_t Vocabulary::intern(std::string_view name, SnapshotIndex seen_at,
                                 std::vector<std::string>& names,
                                 std::unordered_map<std::string, std::uint32_t>& index,
                                 std::vector<SnapshotIndex>& first_seen, bool sealed,
                                 const char* kind) {
  auto it = index.find(std::string(name));
  if (it != index.end()) {
    if (first_seen[it->second] == kNeverSeen) first_seen[it->second] = seen_at;
    return it->second;
  }
  if (sealed) {
    throw ConsistencyError(std::string("unknown ") + kind + " '" + std::string(name) +
                           "' (not listed in the mapping file)");
  }
  const auto id = static_cast<std::uint32_t>(names.size());
  names.emplace_back(name);
  index.emplace(names.back(), id);
  first_seen.push_back(seen_at);
  return id;
}

void Vocabulary::define(std::string_view name, std::uint32_t id, std::vector<std::string>& names,
                        std::unordered_map<std::string, std::uint32_t>& index,
                        std::vector<SnapshotIndex>& first_seen, const char* kind) {
  if (index.contains(std::string(name))) {
    throw ConsistencyError(std::string("duplicate ") + kind + " name '" + std::string(name) + "'");
  }
  if (id >= names.size()) {
    names.resize(id + 1);
    first_seen.resize(id + 1, kNeverSeen);
  } else if (!names[id].empty()) {
    throw ConsistencyError(std::string("duplicate ") + kind + " id " + std::to_string(id));
  }
  names[id] = std::string(name);
  index.emplace(names[id], id);
}

EntityId Vocabulary::intern_entity(std::string_view name, SnapshotIndex seen_at) {
  return intern(name, seen_at, entity_names_, entity_index_, entity_first_seen_,
                entities_sealed_, "entity");
}

RelationId Vocabulary::intern_relation(std::string_view name, SnapshotIndex seen_at) {
  return intern(name, seen_at, relation_names_, relation_index_, relation_first_seen_,
                relations_sealed_, "relation");
}

void Vocabulary::define_entity(std::string_view name, EntityId id) {
  define(name, id, entity_names_, entity_index_, entity_first_seen_, "entity");
}

void Vocabulary::define_relation(std::string_view name, RelationId id) {
  define(name, id, relation_names_, relation_index_, relation_first_seen_, "relation");
}

std::optional<EntityId> Vocabulary::find_entity(std::string_view name) const {
  auto it = entity_index_.find(std::string(name));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::find_relation(std::string_view name) const {
  auto it = relation_index_.find(std::string(name));
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::entity_name(EntityId id) const { return entity_names_.at(id); }
const std::string& Vocabulary::relation_name(RelationId id) const {
  return relation_names_.at(id);
}

std::string Vocabulary::fingerprint() const {
  Fnv1a h;
  h.update("entities\n");
  for (const auto& n : entity_names_) {
    h.update(n);
    h.update("\n");
  }
  h.update("relations\n");
  for (const auto& n : relation_names_) {
    h.update(n);
    h.update("\n");
  }
  return h.hex();
}

void Vocabulary::check_dense() const {
  auto check = [](const std::vector<std::string>& names,
                  const std::unordered_map<std::string, std::uint32_t>& index, const char* kind) {
    if (names.size() != index.size()) {
      throw ConsistencyError(std::string(kind) + " ids are not dense");
    }
    for (std::uint32_t id = 0; id < names.size(); ++id) {
      auto it = index.find(names[id]);
      if (it == index.end() || it->second != id) {
        throw ConsistencyError(std::string(kind) + " bimap is not mutually inverse at id " +
                               std::to_string(id));
      }
    }
  };
  check(entity_names_, entity_index_, "entity");
  check(relation_names_, relation_index_, "relation");
}

// ---------------------------------------------------------------------------
// SnapshotSequence

const Snapshot& SnapshotSequence::at(SnapshotIndex t) const {
  if (t >= snapshots.size()) {
    throw ConfigError("snapshot " + std::to_string(t) + " out of range (sequence has " +
                      std::to_string(snapshots.size()) + ")");
  }
  return snapshots[t];
}

SnapshotStats SnapshotSequence::stats(SnapshotIndex t) const {
  const auto& s = at(t);
  SnapshotStats st;
  st.entities = s.entities.size();
  st.relations = s.relations.size();
  st.train = s.train.size();
  st.valid = s.valid.size();
  st.test = s.test.size();
  st.triples = st.train + st.valid + st.test;
  return st;
}

TripleSet SnapshotSequence::cumulative_triples(SnapshotIndex t,
                                               std::span<const Split> splits) const {
  TripleSet out;
  for (SnapshotIndex i = 0; i <= t; ++i) {
    const auto& s = at(i);
    for (Split split : splits) {
      const auto& list = split == Split::kTrain ? s.train : split == Split::kValid ? s.valid : s.test;
      out.insert(list.begin(), list.end());
    }
  }
  return out;
}

TripleSet SnapshotSequence::cumulative_triples(SnapshotIndex t) const {
  constexpr std::array<Split, 3> all{Split::kTrain, Split::kValid, Split::kTest};
  return cumulative_triples(t, all);
}

void SnapshotSequence::validate(bool permissive_relations) const {
  vocab.check_dense();
  for (SnapshotIndex t = 0; t < snapshots.size(); ++t) {
    const auto& s = snapshots[t];
    const auto where = "snapshot " + std::to_string(t);
    if (s.index != t) throw InvariantError(where + ": index field is " + std::to_string(s.index));
    if (!std::is_sorted(s.entities.begin(), s.entities.end()) ||
        std::adjacent_find(s.entities.begin(), s.entities.end()) != s.entities.end()) {
      throw InvariantError(where + ": entity set is not sorted and unique");
    }
    if (!std::is_sorted(s.relations.begin(), s.relations.end()) ||
        std::adjacent_find(s.relations.begin(), s.relations.end()) != s.relations.end()) {
      throw InvariantError(where + ": relation set is not sorted and unique");
    }
    for (EntityId e : s.entities) {
      if (e >= vocab.entity_count()) throw ConsistencyError(where + ": entity id outside vocabulary");
    }
    for (RelationId r : s.relations) {
      if (r >= vocab.relation_count()) {
        throw ConsistencyError(where + ": relation id outside vocabulary");
      }
    }
    for (const auto* list : {&s.train, &s.valid, &s.test}) {
      for (const Triple& tr : *list) {
        if (!std::binary_search(s.entities.begin(), s.entities.end(), tr.head) ||
            !std::binary_search(s.entities.begin(), s.entities.end(), tr.tail)) {
          throw ConsistencyError(where + ": triple references an entity outside the snapshot");
        }
        if (!std::binary_search(s.relations.begin(), s.relations.end(), tr.relation)) {
          throw ConsistencyError(where + ": triple references a relation outside the snapshot");
        }
      }
    }
    if (t == 0) continue;
    const auto& prev = snapshots[t - 1];
    if (!std::includes(s.entities.begin(), s.entities.end(), prev.entities.begin(),
                       prev.entities.end())) {
      throw InvariantError(where + ": entity set does not contain the previous snapshot's");
    }
    if (!std::includes(s.relations.begin(), s.relations.end(), prev.relations.begin(),
                       prev.relations.end())) {
      throw InvariantError(where + ": relation set does not contain the previous snapshot's");
    }
    if (!permissive_relations && s.relations != snapshots.front().relations) {
      throw ConsistencyError(where + ": new relations appear after snapshot 0");
    }
  }
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

struct RawTriple {
  std::string head, relation, tail;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find('\t') != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      auto pos = line.find('\t', start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  } else {
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
  }
  return fields;
}

std::vector<RawTriple> read_triple_file(const fs::path& path, std::vector<std::string>& warnings) {
  std::ifstream in(path);
  if (!in) throw IngestionError("missing or unreadable triple file: " + path.string());
  std::vector<RawTriple> out;
  std::unordered_map<std::string, bool> seen;
  std::size_t duplicates = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) +
                           ": expected 'head<TAB>relation<TAB>tail'");
    }
    std::string key = fields[0] + '\t' + fields[1] + '\t' + fields[2];
    if (!seen.emplace(std::move(key), true).second) {
      ++duplicates;
      continue;
    }
    out.push_back({std::move(fields[0]), std::move(fields[1]), std::move(fields[2])});
  }
  if (duplicates > 0) {
    warnings.push_back(path.string() + ": dropped " + std::to_string(duplicates) +
                       " duplicate line(s)");
  }
  return out;
}

void read_mapping(const fs::path& path, Vocabulary& vocab, bool entities) {
  std::ifstream in(path);
  if (!in) throw IngestionError("unreadable mapping file: " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) +
                           ": expected 'name<TAB>id'");
    }
    std::uint64_t id = 0;
    try {
      id = std::stoull(fields[1]);
    } catch (const std::exception&) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) + ": bad id");
    }
    if (entities) {
      vocab.define_entity(fields[0], static_cast<EntityId>(id));
    } else {
      vocab.define_relation(fields[0], static_cast<RelationId>(id));
    }
  }
  if (entities) {
    vocab.seal_entities();
  } else {
    vocab.seal_relations();
  }
}

std::vector<fs::path> snapshot_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw IngestionError("dataset root is not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const char* prefix : {"snapshot_", ""}) {
    for (std::size_t i = 0;; ++i) {
      auto dir = root / (std::string(prefix) + std::to_string(i));
      if (!fs::is_directory(dir)) break;
      dirs.push_back(dir);
    }
    if (!dirs.empty()) return dirs;
  }
  throw IngestionError("no snapshot_0 directory under " + root.string());
}

std::vector<std::uint32_t> flags_to_ids(const std::vector<char>& flags) {
  std::vector<std::uint32_t> ids;
  for (std::uint32_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) ids.push_back(i);
  }
  return ids;
}

void set_flag(std::vector<char>& flags, std::uint32_t id) {
  if (id >= flags.size()) flags.resize(id + 1, 0);
  flags[id] = 1;
}

bool has_flag(const std::vector<char>& flags, std::uint32_t id) {
  return id < flags.size() && flags[id] != 0;
}

}  // namespace

SnapshotSequence load_snapshot_sequence(const fs::path& root, const LoadOptions& options) {
  SnapshotSequence seq;
  const auto dirs = snapshot_dirs(root);

  if (fs::exists(root / "entity2id.txt")) read_mapping(root / "entity2id.txt", seq.vocab, true);
  if (fs::exists(root / "relation2id.txt")) {
    read_mapping(root / "relation2id.txt", seq.vocab, false);
  }

  std::vector<char> entity_flags, relation_flags;          // member of E_t / R_t
  std::vector<char> trained_entities, trained_relations;  // occurs in some train split <= t

  for (SnapshotIndex t = 0; t < dirs.size(); ++t) {
    Snapshot snap;
    snap.index = t;
    auto raw_train = read_triple_file(dirs[t] / "train.txt", seq.warnings);
    auto raw_valid = read_triple_file(dirs[t] / "valid.txt", seq.warnings);
    auto raw_test = read_triple_file(dirs[t] / "test.txt", seq.warnings);

    auto convert = [&](const RawTriple& raw, const fs::path& file, bool is_train) {
      Triple tr;
      tr.head = seq.vocab.intern_entity(raw.head, t);
      tr.relation = seq.vocab.intern_relation(raw.relation, t);
      tr.tail = seq.vocab.intern_entity(raw.tail, t);
      if (t > 0 && !options.permissive_relations && seq.vocab.relation_first_seen(tr.relation) == t) {
        throw ConsistencyError(file.string() + ": relation '" + raw.relation +
                               "' first appears after snapshot 0");
      }
      if (is_train) {
        set_flag(trained_entities, tr.head);
        set_flag(trained_entities, tr.tail);
        set_flag(trained_relations, tr.relation);
      } else if (options.strict_splits) {
        if (!has_flag(trained_entities, tr.head) || !has_flag(trained_entities, tr.tail) ||
            !has_flag(trained_relations, tr.relation)) {
          throw ConsistencyError(file.string() + ": triple (" + raw.head + ", " + raw.relation +
                                 ", " + raw.tail + ") uses an id never seen in training");
        }
      }
      set_flag(entity_flags, tr.head);
      set_flag(entity_flags, tr.tail);
      set_flag(relation_flags, tr.relation);
      return tr;
    };

    for (const auto& raw : raw_train) snap.train.push_back(convert(raw, dirs[t] / "train.txt", true));
    for (const auto& raw : raw_valid) snap.valid.push_back(convert(raw, dirs[t] / "valid.txt", false));
    for (const auto& raw : raw_test) snap.test.push_back(convert(raw, dirs[t] / "test.txt", false));

    snap.entities = flags_to_ids(entity_flags);
    snap.relations = flags_to_ids(relation_flags);
    seq.snapshots.push_back(std::move(snap));
  }

  seq.validate(options.permissive_relations);
  return seq;
}

namespace {

void write_triples(const fs::path& path, const std::vector<Triple>& triples, const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestionError("cannot write " + path.string());
  for (const auto& tr : triples) {
    out << vocab.entity_name(tr.head) << '\t' << vocab.relation_name(tr.relation) << '\t'
        << vocab.entity_name(tr.tail) << '\n';
  }
}

}  // namespace

void write_snapshot_sequence(const SnapshotSequence& seq, const fs::path& root) {
  fs::create_directories(root);
  {
    std::ofstream out(root / "entity2id.txt", std::ios::binary | std::ios::trunc);
    for (EntityId id = 0; id < seq.vocab.entity_count(); ++id) {
      out << seq.vocab.entity_name(id) << '\t' << id << '\n';
    }
  }
  {
    std::ofstream out(root / "relation2id.txt", std::ios::binary | std::ios::trunc);
    for (RelationId id = 0; id < seq.vocab.relation_count(); ++id) {
      out << seq.vocab.relation_name(id) << '\t' << id << '\n';
    }
  }
  for (const auto& snap : seq.snapshots) {
    auto dir = root / ("snapshot_" + std::to_string(snap.index));
    fs::create_directories(dir);
    write_triples(dir / "train.txt", snap.train, seq.vocab);
    write_triples(dir / "valid.txt", snap.valid, seq.vocab);
    write_triples(dir / "test.txt", snap.test, seq.vocab);
  }
}

Delta delta_sets(const SnapshotSequence& seq, SnapshotIndex t) {
  if (t == 0) throw ConfigError("delta_sets: snapshot 0 has no predecessor");
  const auto& cur = seq.at(t);
  const auto& prev = seq.at(t - 1);
  Delta d;
  std::set_difference(cur.entities.begin(), cur.entities.end(), prev.entities.begin(),
                      prev.entities.end(), std::back_inserter(d.new_entities));
  const TripleSet earlier = seq.cumulative_triples(t - 1);
  TripleSet emitted;
  for (const auto& tr : cur.train) {
    if (!earlier.contains(tr) && emitted.insert(tr).second) d.new_triples.push_back(tr);
  }
  return d;
}

std::vector<Triple> training_triples(const SnapshotSequence& seq, SnapshotIndex t) {
  if (t == 0) return seq.at(0).train;
  return delta_sets(seq, t).new_triples;
}

Triple sample_negative(const Triple& positive, std::span<const EntityId> candidates,
                       const TripleSet& known, std::mt19937_64& rng) {
  if (candidates.empty()) throw ConfigError("sample_negative: empty candidate set");
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  const bool corrupt_head = coin(rng);
  Triple draw = positive;
  for (int attempt = 0; attempt < kNegativeRetryBound; ++attempt) {
    draw = positive;
    if (corrupt_head) {
      draw.head = candidates[pick(rng)];
    } else {
      draw.tail = candidates[pick(rng)];
    }
    if (!known.contains(draw)) return draw;
  }
  return draw;
}

}  // namespace ckge::kg
