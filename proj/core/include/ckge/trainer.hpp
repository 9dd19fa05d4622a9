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

#ifndef CKGE_TRAINER_HPP_
#define CKGE_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ckge/adam.hpp"
#include "ckge/bayesian_store.hpp"
#include "ckge/clustering.hpp"
#include "ckge/hyperparameters.hpp"
#include "ckge/scoring.hpp"
#include "ckge/types.hpp"

namespace ckge::train {

struct LossSwitches {
  bool kge = true;
  bool bayes = true;
  bool fcc = true;
};

struct LossValues {
  double kge = 0.0;
  double bayes = 0.0;
  double fcc = 0.0;
  double total() const { return kge + bayes + fcc; }
};

struct EpochRecord {
  SnapshotIndex snapshot = 0;
  std::size_t epoch = 0;
  LossValues losses;
  double wall_seconds = 0.0;
};

// Working embeddings for one snapshot plus optimiser state.
struct TrainState {
  EmbeddingTable entities;
  EmbeddingTable relations;
  AdamMoments entity_moments;
  AdamMoments relation_moments;
  AdamMoments proxy_moments;
  std::uint64_t step = 0;
  std::vector<double> loss_ring;  // last kLossRing step totals
  std::size_t ring_next = 0;

  static constexpr std::size_t kLossRing = 256;

  explicit TrainState(std::size_t dim);

  // Copies posterior means for the given ids; moments start empty.
  static TrainState from_prior(const bayes::BayesianStore& store, std::span<const EntityId> entities,
                               std::span<const RelationId> relations);

  void record_loss(double total);
};

// Everything a snapshot's optimisation reads. `clusters` may be null when
// the contrastive term is switched off.
struct TrainContext {
  SnapshotIndex snapshot = 0;
  std::span<const Triple> triples;          // training delta
  std::span<const EntityId> candidates;     // entities for negatives and reassignment
  const TripleSet* known = nullptr;         // facts never used as negatives
  const bayes::BayesianStore* prior = nullptr;
  cluster::ClusterState* clusters = nullptr;
  Hyperparameters hp;
  LossSwitches switches;
  bool freeze_old_centroids = false;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct GradientBundle {
  LossValues losses;
  SparseGradient entities;
  SparseGradient relations;
  SparseGradient proxies;
};

// Sum of the enabled terms' gradients on one batch. Throws NumericError
// naming the first term that produced a non-finite value.
GradientBundle compute_gradients(const TrainState& state, std::span<const TrainingPair> batch,
                                 const TrainContext& ctx);

// One Adam step on a batch.
LossValues train_step(TrainState& state, std::span<const TrainingPair> batch, const TrainContext& ctx);

struct TrainResult {
  std::vector<EpochRecord> epochs;
};

// `epochs` passes of shuffled mini-batch Adam over ctx.triples; the trained
// values stay in `state`. Cluster reassignment and momentum centroid
// updates run every `reassign_every` epochs while the contrastive term is on.
TrainResult train_snapshot(TrainState& state, const TrainContext& ctx);

// Deterministic per-purpose random stream for (seed, snapshot, stream).
std::mt19937_64 make_stream(std::uint64_t seed, SnapshotIndex snapshot, std::uint32_t stream);

enum Stream : std::uint32_t {
  kStreamInit = 1,
  kStreamShuffle = 2,
  kStreamNegatives = 3,
  kStreamProxies = 4,
  kStreamPivots = 5,
};

}  // namespace ckge::train

#endif  // CKGE_TRAINER_HPP_
