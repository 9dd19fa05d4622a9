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

#ifndef CKGE_GRAPH_HPP_
#define CKGE_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ckge/types.hpp"

namespace ckge::cluster {

// Undirected, unlabeled adjacency in CSR form over a fixed node list.
// Relation labels are dropped, parallel edges collapse, self-loops are
// ignored (they add no neighbour and lie on no shortest path).
class AdjacencyGraph {
 public:
  using Node = std::uint32_t;  // local index in [0, node_count)

  AdjacencyGraph() = default;

  // Nodes are the given entity ids; triples touching other ids are ignored.
  static AdjacencyGraph from_triples(std::span<const EntityId> nodes, std::span<const Triple> triples);
  // Nodes 0..n-1 with entity id == local index.
  static AdjacencyGraph from_edges(std::size_t n, std::span<const std::pair<Node, Node>> edges);

  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::span<const Node> neighbors(Node v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Node v) const { return offsets_[v + 1] - offsets_[v]; }
  EntityId entity(Node v) const { return node_ids_[v]; }
  std::optional<Node> local(EntityId e) const;

 private:
  static AdjacencyGraph build(std::vector<EntityId> node_ids, std::vector<std::pair<Node, Node>> edges);

  std::vector<EntityId> node_ids_;
  std::vector<std::int64_t> local_of_;  // entity id -> local index or -1
  std::vector<std::size_t> offsets_{0};
  std::vector<Node> neighbors_;
};

// degree(e) / (N - 1). N is the snapshot's entity count and must be >= 2.
double neighbor_centrality(const AdjacencyGraph& g, EntityId e, std::size_t n_entities);

// Brandes dependency accumulation from the given sources, summed over
// ordered (source, target) pairs. Scalar only needs 0, 1, +, *, / so exact
// rational types work as well as double.
template <typename Scalar = double>
std::vector<Scalar> brandes_dependencies(const AdjacencyGraph& g,
                                         std::span<const AdjacencyGraph::Node> sources) {
  using Node = AdjacencyGraph::Node;
  const std::size_t n = g.node_count();
  std::vector<Scalar> centrality(n, Scalar(0));
  std::vector<Scalar> sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);
  std::vector<Node> order;
  std::vector<Node> queue;
  order.reserve(n);
  queue.reserve(n);
  for (Node s : sources) {
    std::fill(sigma.begin(), sigma.end(), Scalar(0));
    std::fill(delta.begin(), delta.end(), Scalar(0));
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    queue.clear();
    sigma[s] = Scalar(1);
    dist[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Node v = queue[head];
      order.push_back(v);
      for (Node w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] = sigma[w] + sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Node w = *it;
      for (Node v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) {
          delta[v] = delta[v] + (sigma[v] / sigma[w]) * (Scalar(1) + delta[w]);
        }
      }
      if (w != s) centrality[w] = centrality[w] + delta[w];
    }
  }
  return centrality;
}

enum class BetweennessMode { kExact, kSampled };

struct BetweennessOptions {
  BetweennessMode mode = BetweennessMode::kExact;
  std::size_t pivots = 256;
  std::uint64_t seed = 0;
};

// Exact mode: sum over unordered pairs {s, t}, s != t, of sigma(s,t|v) /
// sigma(s,t) with v excluded as an endpoint. Sampled mode runs from `pivots`
// uniformly drawn sources and rescales by node_count / pivots; more pivots
// than nodes falls back to exact. Indexed by local node.
std::vector<double> betweenness_centrality(const AdjacencyGraph& g, const BetweennessOptions& options);

// Exact up to `exact_limit` nodes, sampled with `pivots` sources above.
BetweennessOptions betweenness_policy(std::size_t node_count, std::size_t exact_limit,
                                      std::size_t pivots, std::uint64_t seed);

// IE(e) = neighbor centrality + betweenness, indexed by local node.
std::vector<double> importance_scores(const AdjacencyGraph& g, std::size_t n_entities,
                                      const BetweennessOptions& options);

// Entity ids by descending importance, ties by ascending id.
std::vector<EntityId> importance_order(const AdjacencyGraph& g, std::span<const double> scores);

}  // namespace ckge::cluster

#endif  // CKGE_GRAPH_HPP_
