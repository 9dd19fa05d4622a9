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

#include "ckge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ckge/error.hpp"

namespace ckge::kg {

GrowthRegime parse_regime(const std::string& name) {
  if (name == "equal") return GrowthRegime::kEqual;
  if (name == "higher") return GrowthRegime::kHigher;
  if (name == "lower") return GrowthRegime::kLower;
  throw ConfigError("unknown growth regime '" + name + "' (expected equal|higher|lower)");
}

std::string regime_name(GrowthRegime regime) {
  switch (regime) {
    case GrowthRegime::kEqual: return "equal";
    case GrowthRegime::kHigher: return "higher";
    case GrowthRegime::kLower: return "lower";
  }
  return "equal";
}

std::vector<std::size_t> planned_entity_counts(const SyntheticSpec& spec) {
  if (spec.snapshots == 0) throw ConfigError("synthetic spec: snapshots must be >= 1");
  if (!spec.entities.empty()) {
    if (spec.entities.size() != spec.snapshots) {
      throw ConfigError("synthetic spec: entity list length differs from snapshot count");
    }
    for (std::size_t t = 1; t < spec.entities.size(); ++t) {
      if (spec.entities[t] < spec.entities[t - 1]) {
        throw ConfigError("synthetic spec: entity counts must be non-decreasing");
      }
    }
    return spec.entities;
  }
  std::vector<std::size_t> out(spec.snapshots);
  for (std::size_t t = 0; t < spec.snapshots; ++t) {
    out[t] = spec.final_entities * (t + 1) / spec.snapshots;
  }
  return out;
}

std::vector<std::size_t> planned_triple_counts(const SyntheticSpec& spec) {
  if (!spec.triples.empty()) {
    if (spec.triples.size() != spec.snapshots) {
      throw ConfigError("synthetic spec: triple list length differs from snapshot count");
    }
    return spec.triples;
  }
  std::vector<std::size_t> out(spec.snapshots);
  for (std::size_t t = 0; t < spec.snapshots; ++t) {
    switch (spec.regime) {
      case GrowthRegime::kEqual: out[t] = spec.base_triples; break;
      case GrowthRegime::kHigher: out[t] = spec.base_triples << t; break;
      case GrowthRegime::kLower: out[t] = spec.base_triples << (spec.snapshots - 1 - t); break;
    }
  }
  return out;
}

namespace {

struct LatentModel {
  std::size_t dim;
  std::vector<double> entities;   // row-major
  std::vector<double> relations;  // row-major

  double distance2(std::size_t h, std::size_t r, std::size_t t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = entities[h * dim + i] + relations[r * dim + i] - entities[t * dim + i];
      acc += d * d;
    }
    return acc;
  }
};

class Generator {
 public:
  Generator(const SyntheticSpec& spec, std::size_t total_entities)
      : spec_(spec), rng_(spec.seed) {
    latent_.dim = std::max<std::size_t>(spec.latent_dim, 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    latent_.entities.resize(total_entities * latent_.dim);
    latent_.relations.resize(spec.relations * latent_.dim);
    for (auto& v : latent_.entities) v = normal(rng_);
    // Relations are shorter than typical inter-entity gaps so nearest
    // neighbours of h + r stay distinct from h itself.
    for (auto& v : latent_.relations) v = 0.5 * normal(rng_);
  }

  // Tail among the `tail_choices` nearest latent neighbours of head + relation.
  EntityId pick_tail(EntityId head, std::size_t rel, std::size_t n_entities) {
    const std::size_t k = std::min<std::size_t>(std::max<std::size_t>(spec_.tail_choices, 1), n_entities);
    std::vector<std::pair<double, EntityId>> scored(n_entities);
    for (EntityId e = 0; e < n_entities; ++e) scored[e] = {latent_.distance2(head, rel, e), e};
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    return scored[pick(rng_)].second;
  }

  // Head among the nearest latent neighbours of tail - relation.
  EntityId pick_head(EntityId tail, std::size_t rel, std::size_t n_entities) {
    const std::size_t k = std::min<std::size_t>(std::max<std::size_t>(spec_.tail_choices, 1), n_entities);
    std::vector<std::pair<double, EntityId>> scored(n_entities);
    for (EntityId e = 0; e < n_entities; ++e) scored[e] = {latent_.distance2(e, rel, tail), e};
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    return scored[pick(rng_)].second;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  const SyntheticSpec& spec_;
  std::mt19937_64 rng_;
  LatentModel latent_;
};

}  // namespace

SnapshotSequence generate_synthetic_sequence(const SyntheticSpec& spec) {
  if (spec.relations == 0) throw ConfigError("synthetic spec: relations must be >= 1");
  const auto entity_counts = planned_entity_counts(spec);
  const auto triple_counts = planned_triple_counts(spec);
  if (entity_counts.front() == 0) throw ConfigError("synthetic spec: snapshot 0 needs entities");

  // Capacity and coverage checks up front so no partial sequence is produced.
  std::size_t used = 0;
  for (std::size_t t = 0; t < spec.snapshots; ++t) {
    const double n = static_cast<double>(entity_counts[t]);
    const double capacity = n * n * static_cast<double>(spec.relations);
    used += triple_counts[t];
    if (static_cast<double>(used) > capacity) {
      throw ConfigError("synthetic spec infeasible: " + std::to_string(used) +
                        " triples exceed |E|^2*|R| at snapshot " + std::to_string(t));
    }
    const std::size_t fresh = entity_counts[t] - (t == 0 ? 0 : entity_counts[t - 1]);
    const std::size_t held_out = 2 * (triple_counts[t] / 10);
    if (triple_counts[t] - held_out < fresh) {
      throw ConfigError("synthetic spec infeasible: snapshot " + std::to_string(t) +
                        " has fewer training triples than new entities");
    }
  }

  Generator gen(spec, entity_counts.back());
  auto& rng = gen.rng();

  SnapshotSequence seq;
  std::vector<RelationId> relation_id(spec.relations, 0);
  std::vector<char> relation_known(spec.relations, 0);
  std::vector<char> relation_trained(spec.relations, 0);
  TripleSet all_latent;  // in latent indices (entity ids equal latent ids)

  std::uniform_int_distribution<std::size_t> pick_rel(0, spec.relations - 1);
  std::bernoulli_distribution coin(0.5);

  for (SnapshotIndex t = 0; t < spec.snapshots; ++t) {
    const std::size_t n_entities = entity_counts[t];
    const std::size_t first_new = t == 0 ? 0 : entity_counts[t - 1];
    for (std::size_t e = first_new; e < n_entities; ++e) {
      seq.vocab.intern_entity("e" + std::to_string(e), t);
    }
    std::uniform_int_distribution<EntityId> pick_entity(0, static_cast<EntityId>(n_entities - 1));

    auto try_add = [&](Triple latent, std::vector<Triple>& sink) {
      if (!all_latent.insert(latent).second) return false;
      sink.push_back(latent);
      return true;
    };

    auto random_unused = [&](std::vector<Triple>& sink) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Triple c{pick_entity(rng), static_cast<RelationId>(pick_rel(rng)), pick_entity(rng)};
        if (try_add(c, sink)) return;
      }
      for (EntityId h = 0; h < n_entities; ++h) {
        for (RelationId r = 0; r < spec.relations; ++r) {
          for (EntityId tl = 0; tl < n_entities; ++tl) {
            if (try_add({h, r, tl}, sink)) return;
          }
        }
      }
      throw ConfigError("synthetic spec infeasible: triple space exhausted");
    };

    // Coverage triples: one per new entity, cycling relations so snapshot 0
    // introduces every relation when it can.
    std::vector<Triple> coverage;
    std::size_t rel_cursor = 0;
    for (std::size_t e = first_new; e < n_entities; ++e) {
      const auto entity = static_cast<EntityId>(e);
      bool added = false;
      for (int attempt = 0; attempt < 20 && !added; ++attempt) {
        const std::size_t rel = (t == 0 && attempt == 0) ? (rel_cursor++ % spec.relations) : pick_rel(rng);
        Triple c{};
        c.relation = static_cast<RelationId>(rel);
        if (coin(rng)) {
          c.head = entity;
          c.tail = gen.pick_tail(entity, rel, n_entities);
        } else {
          c.tail = entity;
          c.head = gen.pick_head(entity, rel, n_entities);
        }
        added = try_add(c, coverage);
      }
      if (!added) {
        for (int attempt = 0; attempt < 1000 && !added; ++attempt) {
          Triple c{entity, static_cast<RelationId>(pick_rel(rng)), pick_entity(rng)};
          if (coin(rng)) std::swap(c.head, c.tail);
          added = try_add(c, coverage);
        }
        if (!added) throw ConfigError("synthetic spec infeasible: cannot place new entity");
      }
    }

    std::vector<Triple> rest;
    const std::size_t target = triple_counts[t];
    while (coverage.size() + rest.size() < target) {
      bool added = false;
      for (int attempt = 0; attempt < 20 && !added; ++attempt) {
        const EntityId head = pick_entity(rng);
        const std::size_t rel = pick_rel(rng);
        added = try_add({head, static_cast<RelationId>(rel), gen.pick_tail(head, rel, n_entities)}, rest);
      }
      if (!added) random_unused(rest);
    }
    std::shuffle(rest.begin(), rest.end(), rng);

    const std::size_t n_valid = target / 10;
    const std::size_t n_test = target / 10;
    Snapshot snap;
    snap.index = t;
    snap.train = coverage;
    const std::size_t train_rest = target - n_valid - n_test - coverage.size();
    snap.train.insert(snap.train.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(train_rest));
    for (const auto& tr : snap.train) relation_trained[tr.relation] = 1;
    for (std::size_t i = train_rest; i < rest.size(); ++i) {
      const Triple& tr = rest[i];
      if (!relation_trained[tr.relation]) {
        // A held-out fact with an untrained relation would be unpredictable.
        snap.train.push_back(tr);
        relation_trained[tr.relation] = 1;
      } else if (i < train_rest + n_valid) {
        snap.valid.push_back(tr);
      } else {
        snap.test.push_back(tr);
      }
    }

    // Map latent relation indices to vocabulary ids in first-use order.
    auto remap = [&](std::vector<Triple>& list) {
      for (auto& tr : list) {
        if (!relation_known[tr.relation]) {
          relation_known[tr.relation] = 1;
          relation_id[tr.relation] = seq.vocab.intern_relation("r" + std::to_string(tr.relation), t);
        }
        tr.relation = relation_id[tr.relation];
      }
    };
    remap(snap.train);
    remap(snap.valid);
    remap(snap.test);

    snap.entities.resize(n_entities);
    std::iota(snap.entities.begin(), snap.entities.end(), EntityId{0});
    for (std::size_t r = 0; r < spec.relations; ++r) {
      if (relation_known[r]) snap.relations.push_back(relation_id[r]);
    }
    std::sort(snap.relations.begin(), snap.relations.end());
    seq.snapshots.push_back(std::move(snap));
  }

  seq.validate(true);
  return seq;
}

}  // namespace ckge::kg
