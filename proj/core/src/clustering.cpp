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

#include "ckge/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ckge::cluster {

UnassignedEntityError::UnassignedEntityError(EntityId e)
    : ConfigError("entity " + std::to_string(e) + " has no cluster assignment"), entity(e) {}

Centroids::Centroids(std::size_t k, std::size_t dim) : vectors(dim), active(k, 0) {
  for (std::size_t i = 0; i < k; ++i) vectors.add(static_cast<EmbeddingTable::Id>(i));
}

std::size_t Centroids::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
}

double ClusterState::alpha(std::size_t k, AlphaMode mode) const {
  const auto n = assignment.sizes.at(k);
  if (n == 0) return 0.0;
  return mode == AlphaMode::kInverseSize ? 1.0 / static_cast<double>(n) : 1.0;
}

Assignment assign_clusters(std::span<const EntityId> ordered, std::size_t k) {
  if (k == 0) throw ConfigError("assign_clusters: K must be >= 1");
  Assignment a;
  a.sizes.assign(k, 0);
  if (ordered.empty()) return a;
  const auto max_id = *std::max_element(ordered.begin(), ordered.end());
  a.cluster_of.assign(static_cast<std::size_t>(max_id) + 1, kUnassigned);
  const std::size_t m = (ordered.size() + k - 1) / k;
  for (std::size_t p = 0; p < ordered.size(); ++p) {
    const auto c = static_cast<std::uint32_t>(p / m);
    a.cluster_of[ordered[p]] = c;
    ++a.sizes[c];
  }
  return a;
}

namespace {

// Member means keyed by cluster; counts[k] == 0 marks an empty cluster.
void member_means(const ClusterState& state, const EmbeddingTable& embeddings,
                  std::vector<double>& sums, std::vector<std::size_t>& counts) {
  const std::size_t d = embeddings.dim();
  sums.assign(state.k() * d, 0.0);
  counts.assign(state.k(), 0);
  const auto& of = state.assignment.cluster_of;
  for (EntityId e = 0; e < of.size(); ++e) {
    const auto c = of[e];
    if (c == kUnassigned) continue;
    const auto row = embeddings.row(e);
    for (std::size_t i = 0; i < d; ++i) sums[c * d + i] += row[i];
    ++counts[c];
  }
  for (std::size_t c = 0; c < state.k(); ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t i = 0; i < d; ++i) sums[c * d + i] /= static_cast<double>(counts[c]);
  }
}

}  // namespace

void init_centroids(ClusterState& state, const EmbeddingTable& embeddings) {
  std::vector<double> means;
  std::vector<std::size_t> counts;
  member_means(state, embeddings, means, counts);
  const std::size_t d = embeddings.dim();
  for (std::size_t c = 0; c < state.k(); ++c) {
    const bool frozen = c < state.frozen_old.size() && state.frozen_old[c];
    if (frozen) continue;
    if (counts[c] == 0) {
      state.centroids.active[c] = 0;
      continue;
    }
    state.centroids.vectors.set(static_cast<EmbeddingTable::Id>(c),
                                std::span<const double>(means.data() + c * d, d));
    state.centroids.active[c] = 1;
  }
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < kNormFloor || nb < kNormFloor) return 0.0;
  return dot / (na * nb);
}

ContrastiveResult contrastive_term(std::span<const double> x, std::size_t k,
                                   const Centroids& centroids, double tau) {
  if (!(tau > 0.0)) throw ConfigError("contrastive_term: tau must be > 0");
  if (k >= centroids.count() || !centroids.active[k]) {
    throw ConfigError("contrastive_term: cluster " + std::to_string(k) + " is not active");
  }
  const std::size_t d = x.size();
  ContrastiveResult out{0.0, std::vector<double>(d, 0.0)};

  double x_norm = 0.0;
  for (double v : x) x_norm += v * v;
  x_norm = std::sqrt(x_norm);

  const std::size_t K = centroids.count();
  std::vector<double> cos(K, 0.0), c_norm(K, 0.0), logits(K, 0.0);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < K; ++j) {
    if (!centroids.active[j]) continue;
    const auto c = centroids.vectors.row(static_cast<EmbeddingTable::Id>(j));
    double dot = 0.0, nc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      dot += x[i] * c[i];
      nc += c[i] * c[i];
    }
    c_norm[j] = std::sqrt(nc);
    cos[j] = (x_norm < kNormFloor || c_norm[j] < kNormFloor) ? 0.0 : dot / (x_norm * c_norm[j]);
    logits[j] = cos[j] / tau;
    max_logit = std::max(max_logit, logits[j]);
  }
  double z = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    if (centroids.active[j]) z += std::exp(logits[j] - max_logit);
  }
  const double log_z = max_logit + std::log(z);
  out.loss = log_z - logits[k];

  if (x_norm < kNormFloor) return out;
  // d cos(x, c) / dx = c / (|x||c|) - cos * x / |x|^2
  for (std::size_t j = 0; j < K; ++j) {
    if (!centroids.active[j] || c_norm[j] < kNormFloor) continue;
    const double p = std::exp(logits[j] - log_z);
    const double weight = (p - (j == k ? 1.0 : 0.0)) / tau;
    if (weight == 0.0) continue;
    const auto c = centroids.vectors.row(static_cast<EmbeddingTable::Id>(j));
    const double a = weight / (x_norm * c_norm[j]);
    const double b = weight * cos[j] / (x_norm * x_norm);
    for (std::size_t i = 0; i < d; ++i) out.gradient[i] += a * c[i] - b * x[i];
  }
  return out;
}

FccResult fcc_loss(std::span<const EntityId> batch_entities, const EmbeddingTable& entities,
                   const ClusterState& state, double tau, AlphaMode alpha_mode) {
  FccResult out{0.0, 0.0, 0.0, SparseGradient(entities.dim()), SparseGradient(entities.dim())};
  std::vector<EntityId> unique(batch_entities.begin(), batch_entities.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  for (EntityId e : unique) {
    const auto k = state.assignment.of(e);
    if (k == kUnassigned || !state.centroids.active[k]) throw UnassignedEntityError(e);
    const double alpha = state.alpha(k, alpha_mode);
    if (alpha == 0.0) continue;
    auto term = contrastive_term(entities.row(e), k, state.centroids, tau);
    out.entity_part += alpha * term.loss;
    out.entity_grad.accumulate(e, term.gradient, alpha);
  }
  for (std::size_t k = 0; k < state.k(); ++k) {
    if (!state.centroids.active[k]) continue;
    const auto id = static_cast<EmbeddingTable::Id>(k);
    auto term = contrastive_term(state.proxies.row(id), k, state.centroids, tau);
    out.proxy_part += term.loss;
    out.proxy_grad.accumulate(id, term.gradient);
  }
  out.loss = out.entity_part + out.proxy_part;
  return out;
}

void momentum_update(std::span<double> centroid, std::span<const double> member_mean, double eta) {
  if (eta < 0.0 || eta > 1.0) throw ConfigError("momentum_update: eta must lie in [0, 1]");
  for (std::size_t i = 0; i < centroid.size(); ++i) {
    centroid[i] = (1.0 - eta) * centroid[i] + eta * member_mean[i];
  }
}

void update_centroids(ClusterState& state, const EmbeddingTable& embeddings, double eta,
                      bool freeze_old) {
  std::vector<double> means;
  std::vector<std::size_t> counts;
  member_means(state, embeddings, means, counts);
  const std::size_t d = embeddings.dim();
  for (std::size_t c = 0; c < state.k(); ++c) {
    if (!state.centroids.active[c] || counts[c] == 0) continue;
    if (freeze_old && c < state.frozen_old.size() && state.frozen_old[c]) continue;
    momentum_update(state.centroids.vectors.row(static_cast<EmbeddingTable::Id>(c)),
                    std::span<const double>(means.data() + c * d, d), eta);
  }
}

void reassign_entities(ClusterState& state, const EmbeddingTable& embeddings,
                       std::span<const EntityId> entities) {
  if (state.centroids.active_count() == 0) {
    throw ConfigError("reassign_entities: no active centroid");
  }
  auto& a = state.assignment;
  a.sizes.assign(state.k(), 0);
  std::fill(a.cluster_of.begin(), a.cluster_of.end(), kUnassigned);
  for (EntityId e : entities) {
    const auto x = embeddings.row(e);
    std::uint32_t best = kUnassigned;
    double best_cos = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < state.k(); ++k) {
      if (!state.centroids.active[k]) continue;
      const double c = cosine(x, state.centroids.vectors.row(static_cast<EmbeddingTable::Id>(k)));
      if (c > best_cos) {
        best_cos = c;
        best = static_cast<std::uint32_t>(k);
      }
    }
    if (e >= a.cluster_of.size()) a.cluster_of.resize(static_cast<std::size_t>(e) + 1, kUnassigned);
    a.cluster_of[e] = best;
    ++a.sizes[best];
  }
}

ClusterState build_cluster_state(const AdjacencyGraph& graph, std::size_t n_entities,
                                 const EmbeddingTable& embeddings, const ClusterState* previous,
                                 const ClusterBuildOptions& options, std::mt19937_64& rng) {
  const std::size_t K = options.clusters;
  const std::size_t d = embeddings.dim();
  ClusterState st;
  const auto scores = importance_scores(graph, n_entities, options.betweenness);
  const auto order = importance_order(graph, scores);
  st.assignment = assign_clusters(order, K);
  for (AdjacencyGraph::Node v = 0; v < graph.node_count(); ++v) {
    const auto e = graph.entity(v);
    if (e >= st.importance.size()) st.importance.resize(static_cast<std::size_t>(e) + 1, 0.0);
    st.importance[e] = scores[v];
  }

  st.centroids = Centroids(K, d);
  st.frozen_old.assign(K, 0);
  st.proxies = EmbeddingTable(d);
  for (std::size_t k = 0; k < K; ++k) st.proxies.add(static_cast<EmbeddingTable::Id>(k));

  if (previous != nullptr) {
    if (previous->k() != K || previous->centroids.vectors.dim() != d) {
      throw ConfigError("build_cluster_state: previous state has a different shape");
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (!previous->centroids.active[k]) continue;
      const auto id = static_cast<EmbeddingTable::Id>(k);
      st.frozen_old[k] = 1;
      st.centroids.active[k] = 1;
      st.centroids.vectors.set(id, previous->centroids.vectors.row(id));
      st.proxies.set(id, previous->proxies.row(id));
    }
  }
  init_centroids(st, embeddings);

  std::normal_distribution<double> noise(0.0, kProxyNoise);
  for (std::size_t k = 0; k < K; ++k) {
    if (st.frozen_old[k] || !st.centroids.active[k]) continue;
    const auto id = static_cast<EmbeddingTable::Id>(k);
    const auto c = st.centroids.vectors.row(id);
    auto v = st.proxies.row(id);
    for (std::size_t i = 0; i < d; ++i) v[i] = c[i] + noise(rng);
  }
  return st;
}

}  // namespace ckge::cluster
