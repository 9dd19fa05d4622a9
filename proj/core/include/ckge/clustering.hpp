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

#ifndef CKGE_CLUSTERING_HPP_
#define CKGE_CLUSTERING_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "ckge/embedding_table.hpp"
#include "ckge/error.hpp"
#include "ckge/graph.hpp"
#include "ckge/hyperparameters.hpp"
#include "ckge/types.hpp"

namespace ckge::cluster {

inline constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();
inline constexpr double kNormFloor = 1e-12;
inline constexpr double kProxyNoise = 0.01;

// Thrown by fcc_loss when a batch entity has no cluster.
class UnassignedEntityError : public ConfigError {
 public:
  explicit UnassignedEntityError(EntityId e);
  EntityId entity;
};

struct Assignment {
  std::vector<std::uint32_t> cluster_of;  // indexed by entity id, kUnassigned if none
  std::vector<std::size_t> sizes;         // N_k

  std::uint32_t of(EntityId e) const { return e < cluster_of.size() ? cluster_of[e] : kUnassigned; }
};

// Centroid vectors c_k. Rows exist for all K clusters; only active rows
// take part in softmax denominators.
struct Centroids {
  EmbeddingTable vectors;
  std::vector<std::uint8_t> active;

  Centroids() = default;
  Centroids(std::size_t k, std::size_t dim);
  std::size_t count() const { return active.size(); }
  std::size_t active_count() const;
};

struct ClusterState {
  Assignment assignment;
  Centroids centroids;
  EmbeddingTable proxies;                  // v_k, trainable
  std::vector<double> importance;          // IE by entity id
  std::vector<std::uint8_t> frozen_old;    // clusters inherited from the previous snapshot

  std::size_t k() const { return centroids.count(); }
  // 1/N_k or 1; 0 for empty clusters.
  double alpha(std::size_t k, AlphaMode mode) const;
};

// Fixed-size sequential fill: m = ceil(n / K), position p -> cluster p / m.
Assignment assign_clusters(std::span<const EntityId> ordered, std::size_t k);

// Mean of member embeddings for every non-frozen cluster with members;
// frozen clusters keep their centroid and empty non-frozen ones go inactive.
void init_centroids(ClusterState& state, const EmbeddingTable& embeddings);

// Cosine similarity; 0 when either norm is below kNormFloor.
double cosine(std::span<const double> a, std::span<const double> b);

struct ContrastiveResult {
  double loss = 0.0;
  std::vector<double> gradient;  // w.r.t. x
};

// -log softmax_k(cos(x, c_j) / tau) over active centroids.
ContrastiveResult contrastive_term(std::span<const double> x, std::size_t k,
                                   const Centroids& centroids, double tau);

struct FccResult {
  double loss = 0.0;
  double entity_part = 0.0;
  double proxy_part = 0.0;
  SparseGradient entity_grad;
  SparseGradient proxy_grad;
};

// sum_k [ alpha_k * sum_{e in cluster k and batch} L(e, c_k) + L(v_k, c_k) ]
// minimised as written (no outer minus). Centroids receive no gradient.
FccResult fcc_loss(std::span<const EntityId> batch_entities, const EmbeddingTable& entities,
                   const ClusterState& state, double tau, AlphaMode alpha_mode);

// c <- (1 - eta) c + eta * member_mean.
void momentum_update(std::span<double> centroid, std::span<const double> member_mean, double eta);

// Applies momentum_update to every active cluster that has members. With
// freeze_old set, clusters inherited from the previous snapshot are skipped.
void update_centroids(ClusterState& state, const EmbeddingTable& embeddings, double eta,
                      bool freeze_old);

// Each entity goes to argmax_k cos(e, c_k) over active centroids, ties to the
// lowest k. Sizes are refreshed.
void reassign_entities(ClusterState& state, const EmbeddingTable& embeddings,
                       std::span<const EntityId> entities);

struct ClusterBuildOptions {
  std::size_t clusters = 16;
  BetweennessOptions betweenness;
};

// Snapshot-start refresh: importance on `graph`, sequential fixed-size
// assignment, centroids inherited for clusters active in `previous` and
// means elsewhere, proxies inherited or drawn as c_k + N(0, kProxyNoise).
ClusterState build_cluster_state(const AdjacencyGraph& graph, std::size_t n_entities,
                                 const EmbeddingTable& embeddings, const ClusterState* previous,
                                 const ClusterBuildOptions& options, std::mt19937_64& rng);

}  // namespace ckge::cluster

#endif  // CKGE_CLUSTERING_HPP_
