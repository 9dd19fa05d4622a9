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

#include "ckge/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "ckge/error.hpp"

namespace ckge::cluster {

AdjacencyGraph AdjacencyGraph::build(std::vector<EntityId> node_ids,
                                     std::vector<std::pair<Node, Node>> edges) {
  AdjacencyGraph g;
  g.node_ids_ = std::move(node_ids);
  const std::size_t n = g.node_ids_.size();
  if (!g.node_ids_.empty()) {
    const auto max_id = *std::max_element(g.node_ids_.begin(), g.node_ids_.end());
    g.local_of_.assign(static_cast<std::size_t>(max_id) + 1, -1);
    for (Node v = 0; v < n; ++v) g.local_of_[g.node_ids_[v]] = v;
  }
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    ++degree[a];
    ++degree[b];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    g.neighbors_[cursor[a]++] = b;
    g.neighbors_[cursor[b]++] = a;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }
  return g;
}

AdjacencyGraph AdjacencyGraph::from_triples(std::span<const EntityId> nodes,
                                            std::span<const Triple> triples) {
  std::vector<EntityId> ids(nodes.begin(), nodes.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::int64_t> local_of;
  if (!ids.empty()) {
    local_of.assign(static_cast<std::size_t>(ids.back()) + 1, -1);
    for (Node v = 0; v < ids.size(); ++v) local_of[ids[v]] = v;
  }
  auto lookup = [&](EntityId e) -> std::int64_t {
    return e < local_of.size() ? local_of[e] : -1;
  };
  std::vector<std::pair<Node, Node>> edges;
  edges.reserve(triples.size());
  for (const auto& tr : triples) {
    const auto a = lookup(tr.head);
    const auto b = lookup(tr.tail);
    if (a < 0 || b < 0) continue;
    edges.emplace_back(static_cast<Node>(a), static_cast<Node>(b));
  }
  return build(std::move(ids), std::move(edges));
}

AdjacencyGraph AdjacencyGraph::from_edges(std::size_t n, std::span<const std::pair<Node, Node>> edges) {
  std::vector<EntityId> ids(n);
  std::iota(ids.begin(), ids.end(), EntityId{0});
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw ConfigError("edge endpoint out of range");
  }
  return build(std::move(ids), {edges.begin(), edges.end()});
}

std::optional<AdjacencyGraph::Node> AdjacencyGraph::local(EntityId e) const {
  if (e >= local_of_.size() || local_of_[e] < 0) return std::nullopt;
  return static_cast<Node>(local_of_[e]);
}

double neighbor_centrality(const AdjacencyGraph& g, EntityId e, std::size_t n_entities) {
  if (n_entities < 2) throw ConfigError("neighbor_centrality needs N >= 2");
  const auto v = g.local(e);
  if (!v) throw ConfigError("neighbor_centrality: entity " + std::to_string(e) + " not in graph");
  return static_cast<double>(g.degree(*v)) / static_cast<double>(n_entities - 1);
}

std::vector<double> betweenness_centrality(const AdjacencyGraph& g, const BetweennessOptions& options) {
  const std::size_t n = g.node_count();
  std::vector<AdjacencyGraph::Node> sources(n);
  std::iota(sources.begin(), sources.end(), AdjacencyGraph::Node{0});
  double scale = 0.5;  // ordered pairs -> unordered pairs
  if (options.mode == BetweennessMode::kSampled && options.pivots < n) {
    if (options.pivots == 0) throw ConfigError("sampled betweenness needs >= 1 pivot");
    std::mt19937_64 rng(options.seed);
    std::shuffle(sources.begin(), sources.end(), rng);
    sources.resize(options.pivots);
    std::sort(sources.begin(), sources.end());
    scale *= static_cast<double>(n) / static_cast<double>(options.pivots);
  }
  auto c = brandes_dependencies<double>(g, sources);
  for (auto& v : c) v *= scale;
  return c;
}

BetweennessOptions betweenness_policy(std::size_t node_count, std::size_t exact_limit,
                                      std::size_t pivots, std::uint64_t seed) {
  BetweennessOptions o;
  o.mode = node_count <= exact_limit ? BetweennessMode::kExact : BetweennessMode::kSampled;
  o.pivots = pivots;
  o.seed = seed;
  return o;
}

std::vector<double> importance_scores(const AdjacencyGraph& g, std::size_t n_entities,
                                      const BetweennessOptions& options) {
  auto scores = betweenness_centrality(g, options);
  for (AdjacencyGraph::Node v = 0; v < g.node_count(); ++v) {
    scores[v] += neighbor_centrality(g, g.entity(v), n_entities);
  }
  return scores;
}

std::vector<EntityId> importance_order(const AdjacencyGraph& g, std::span<const double> scores) {
  if (scores.size() != g.node_count()) throw ConfigError("importance_order: score count mismatch");
  std::vector<AdjacencyGraph::Node> nodes(g.node_count());
  std::iota(nodes.begin(), nodes.end(), AdjacencyGraph::Node{0});
  std::sort(nodes.begin(), nodes.end(), [&](auto a, auto b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return g.entity(a) < g.entity(b);
  });
  std::vector<EntityId> out(nodes.size());
  std::transform(nodes.begin(), nodes.end(), out.begin(), [&](auto v) { return g.entity(v); });
  return out;
}

}  // namespace ckge::cluster
