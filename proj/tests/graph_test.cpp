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

#include <gtest/gtest.h>

#include <algorithm>

#include "ckge/error.hpp"
#include "oracles.hpp"

namespace ckge::cluster {
namespace {

using oracle::Edge;
using oracle::Rational;
using Node = AdjacencyGraph::Node;

std::vector<Edge> star(std::uint32_t leaves) {
  std::vector<Edge> e;
  for (std::uint32_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return e;
}

std::vector<Rational> exact_rational(const AdjacencyGraph& g) {
  std::vector<Node> sources(g.node_count());
  for (Node v = 0; v < g.node_count(); ++v) sources[v] = v;
  auto c = brandes_dependencies<Rational>(g, sources);
  for (auto& x : c) x /= 2;
  return c;
}

TEST(Centrality, NeighborCentralityOfStar) {
  const auto es = star(4);
  const auto g = AdjacencyGraph::from_edges(5, es);
  EXPECT_DOUBLE_EQ(neighbor_centrality(g, 0, 5), 1.0);
  EXPECT_DOUBLE_EQ(neighbor_centrality(g, 3, 5), 0.25);
  const auto lonely = AdjacencyGraph::from_edges(3, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(neighbor_centrality(lonely, 2, 3), 0.0);
  EXPECT_THROW(neighbor_centrality(g, 0, 1), ConfigError);
}

TEST(Centrality, AnalyticCases) {
  const std::vector<Edge> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (double v : betweenness_centrality(AdjacencyGraph::from_edges(4, k4), {})) EXPECT_EQ(v, 0.0);

  const auto path = betweenness_centrality(AdjacencyGraph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}}), {});
  EXPECT_EQ(path[1], 1.0);
  EXPECT_EQ(path[0], 0.0);

  const auto st = betweenness_centrality(AdjacencyGraph::from_edges(5, star(4)), {});
  EXPECT_EQ(st[0], 6.0);
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(st[i], 0.0);
}

TEST(Centrality, SelfLoopsAndParallelEdgesCollapse) {
  const std::vector<Triple> triples{{0, 0, 1}, {1, 3, 0}, {1, 1, 1}, {1, 0, 2}};
  const std::vector<EntityId> nodes{0, 1, 2};
  const auto g = AdjacencyGraph::from_triples(nodes, triples);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(1), 2u);
}

TEST(Centrality, BrandesEqualsPathEnumerationOnAllSmallGraphs) {
  for (std::uint32_t n = 2; n <= 6; ++n) {
    std::vector<Edge> slots;
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) slots.emplace_back(a, b);
    }
    for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (mask >> i & 1) edges.push_back(slots[i]);
      }
      const auto adj = oracle::adjacency(n, edges);
      const auto expected = oracle::brute_force_betweenness(adj);
      const auto got = exact_rational(AdjacencyGraph::from_edges(n, edges));
      ASSERT_EQ(got, expected) << "n=" << n << " mask=" << mask;
    }
  }
}

TEST(Centrality, DoublePathAgreesWithRational) {
  std::mt19937_64 rng(6);
  for (int c = 0; c < 300; ++c) {
    const std::uint32_t n = 7 + c % 4;
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(0.35);
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        if (coin(rng)) edges.emplace_back(a, b);
      }
    }
    const auto g = AdjacencyGraph::from_edges(n, edges);
    const auto expected = oracle::brute_force_betweenness(oracle::adjacency(n, edges));
    ASSERT_EQ(exact_rational(g), expected);
    const auto approx = betweenness_centrality(g, {});
    for (std::uint32_t v = 0; v < n; ++v) {
      EXPECT_NEAR(approx[v], boost::rational_cast<double>(expected[v]), 1e-12);
    }
  }
}

TEST(Centrality, DegreeOneVerticesHaveZeroBetweenness) {
  std::mt19937_64 rng(10);
  for (int c = 0; c < 100; ++c) {
    const std::uint32_t n = 12;
    std::vector<Edge> edges;
    for (std::uint32_t v = 1; v < n; ++v) {
      edges.emplace_back(std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng), v);
    }
    const auto g = AdjacencyGraph::from_edges(n, edges);
    const auto bc = betweenness_centrality(g, {});
    for (Node v = 0; v < n; ++v) {
      EXPECT_GE(bc[v], 0.0);
      if (g.degree(v) == 1) {
        EXPECT_EQ(bc[v], 0.0);
      }
      const double nc = neighbor_centrality(g, v, n);
      EXPECT_GE(nc, 0.0);
      EXPECT_LE(nc, 1.0);
    }
  }
}

TEST(Centrality, SampledModeRescalesAndClamps) {
  const auto g = AdjacencyGraph::from_edges(5, star(4));
  BetweennessOptions o;
  o.mode = BetweennessMode::kSampled;
  o.pivots = 10;
  EXPECT_EQ(betweenness_centrality(g, o), betweenness_centrality(g, {}));
  // Path on 40 nodes with all 40 pivots minus one: estimates stay unbiased
  // in expectation; check the rescale against a hand computation.
  std::vector<Edge> path;
  for (std::uint32_t i = 0; i + 1 < 40; ++i) path.emplace_back(i, i + 1);
  const auto pg = AdjacencyGraph::from_edges(40, path);
  o.pivots = 20;
  o.seed = 3;
  const auto sampled = betweenness_centrality(pg, o);
  std::vector<Node> sources(40);
  for (Node v = 0; v < 40; ++v) sources[v] = v;
  std::mt19937_64 rng(3);
  std::shuffle(sources.begin(), sources.end(), rng);
  sources.resize(20);
  const auto partial = brandes_dependencies<double>(pg, sources);
  for (Node v = 0; v < 40; ++v) EXPECT_NEAR(sampled[v], partial[v] * 0.5 * 2.0, 1e-9);
  EXPECT_EQ(betweenness_policy(2001, 2000, 256, 1).mode, BetweennessMode::kSampled);
  EXPECT_EQ(betweenness_policy(2000, 2000, 256, 1).mode, BetweennessMode::kExact);
}

TEST(Importance, StarCenterFirstAndTieBreakById) {
  const auto g = AdjacencyGraph::from_edges(5, star(4));
  const auto s = importance_scores(g, 5, {});
  EXPECT_DOUBLE_EQ(s[0], 7.0);
  EXPECT_DOUBLE_EQ(s[1], 0.25);
  EXPECT_EQ(importance_order(g, s), (std::vector<EntityId>{0, 1, 2, 3, 4}));

  const auto isolated = AdjacencyGraph::from_edges(4, std::vector<Edge>{});
  const auto zeros = importance_scores(isolated, 4, {});
  EXPECT_EQ(importance_order(isolated, zeros), (std::vector<EntityId>{0, 1, 2, 3}));
}

TEST(Importance, AddingEdgeNeverDemotesEndpointBelowIsolatedNodes) {
  std::mt19937_64 rng(99);
  for (int c = 0; c < 100; ++c) {
    const std::uint32_t n = 10;
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(0.2);
    // Node 9 stays isolated as the untouched reference.
    for (std::uint32_t a = 0; a < n - 1; ++a) {
      for (std::uint32_t b = a + 1; b < n - 1; ++b) {
        if (coin(rng)) edges.emplace_back(a, b);
      }
    }
    const auto before = AdjacencyGraph::from_edges(n, edges);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 2);
    const std::uint32_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    edges.emplace_back(a, b);
    const auto after = AdjacencyGraph::from_edges(n, edges);
    EXPECT_GE(neighbor_centrality(after, a, n), neighbor_centrality(before, a, n));
    const auto order = importance_order(after, importance_scores(after, n, {}));
    const auto pos = [&](EntityId e) { return std::find(order.begin(), order.end(), e) - order.begin(); };
    EXPECT_LT(pos(a), pos(9));
    EXPECT_LT(pos(b), pos(9));
  }
}

}  // namespace
}  // namespace ckge::cluster
