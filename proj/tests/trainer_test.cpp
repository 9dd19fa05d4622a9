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

#include "ckge/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "ckge/error.hpp"
#include "ckge/kg_core.hpp"
#include "support.hpp"

namespace ckge::train {
namespace {

using ckge::testing::central_difference;
using ckge::testing::rel_err;

struct Fixture {
  std::size_t n_entities = 8;
  std::size_t dim = 4;
  std::vector<Triple> triples;
  std::vector<EntityId> candidates;
  std::vector<RelationId> relations{0, 1};
  TripleSet known;
  bayes::BayesianStore store{4};
  cluster::ClusterState clusters;
  Hyperparameters hp;

  explicit Fixture(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    candidates.resize(n_entities);
    std::iota(candidates.begin(), candidates.end(), 0);
    for (EntityId e = 0; e < n_entities; ++e) {
      triples.push_back({e, e % 2, static_cast<EntityId>((e + 1) % n_entities)});
    }
    known = TripleSet(triples.begin(), triples.end());
    bayes::init_new_ids(store.entities, candidates, 0.5, rng);
    bayes::init_new_ids(store.relations, relations, 0.5, rng);
    hp.dim = dim;
    hp.clusters = 3;
    hp.epochs = 10;
    hp.batch_size = 4;
    hp.seed = seed;
    std::vector<std::pair<cluster::AdjacencyGraph::Node, cluster::AdjacencyGraph::Node>> edges;
    for (const auto& t : triples) edges.emplace_back(t.head, t.tail);
    const auto g = cluster::AdjacencyGraph::from_edges(n_entities, edges);
    cluster::ClusterBuildOptions opts;
    opts.clusters = hp.clusters;
    // Perturb the means so the training state differs from the prior.
    EmbeddingTable means = store.entities.means();
    clusters = cluster::build_cluster_state(g, n_entities, means, nullptr, opts, rng);
  }

  TrainContext context(LossSwitches sw) {
    TrainContext ctx;
    ctx.triples = triples;
    ctx.candidates = candidates;
    ctx.known = &known;
    ctx.prior = &store;
    ctx.clusters = &clusters;
    ctx.hp = hp;
    ctx.switches = sw;
    return ctx;
  }

  TrainState state() {
    auto s = TrainState::from_prior(store, candidates, relations);
    std::mt19937_64 rng(hp.seed + 100);
    for (EntityId e : candidates) {
      for (auto& v : s.entities.row(e)) v += std::normal_distribution<double>(0, 0.3)(rng);
    }
    return s;
  }

  std::vector<TrainingPair> batch() {
    std::mt19937_64 rng(hp.seed + 7);
    std::vector<TrainingPair> out;
    for (const auto& t : triples) out.push_back({t, kg::sample_negative(t, candidates, known, rng)});
    return out;
  }
};

double row_value(const SparseGradient& g, std::uint32_t id, std::size_t j) {
  return g.contains(id) ? g.row(id)[j] : 0.0;
}

TEST(Gradients, TotalIsSumOfTerms) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Fixture f(seed);
    const auto s = f.state();
    const auto b = f.batch();
    const auto all = compute_gradients(s, b, f.context({true, true, true}));
    const auto kge = compute_gradients(s, b, f.context({true, false, false}));
    const auto bay = compute_gradients(s, b, f.context({false, true, false}));
    const auto fcc = compute_gradients(s, b, f.context({false, false, true}));
    EXPECT_NEAR(all.losses.total(), kge.losses.kge + bay.losses.bayes + fcc.losses.fcc, 1e-12);
    for (EntityId e : f.candidates) {
      for (std::size_t j = 0; j < f.dim; ++j) {
        EXPECT_NEAR(row_value(all.entities, e, j),
                    row_value(kge.entities, e, j) + row_value(bay.entities, e, j) +
                        row_value(fcc.entities, e, j),
                    1e-12);
      }
    }
  }
}

TEST(Gradients, TotalMatchesFiniteDifferences) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Fixture f(seed);
    auto s = f.state();
    const auto b = f.batch();
    const auto ctx = f.context({true, true, true});
    bool smooth = true;
    for (const auto& p : b) {
      const auto sc = [&](const Triple& t) {
        return transe_score(s.entities.row(t.head), s.relations.row(t.relation), s.entities.row(t.tail));
      };
      if (std::abs(f.hp.margin + sc(p.positive) - sc(p.negative)) < 0.05) smooth = false;
    }
    if (!smooth) continue;
    ++checked;
    const auto g = compute_gradients(s, b, ctx);
    auto loss = [&] { return compute_gradients(s, b, ctx).losses.total(); };
    for (EntityId e : f.candidates) {
      for (std::size_t j = 0; j < f.dim; ++j) {
        EXPECT_LE(rel_err(row_value(g.entities, e, j), central_difference(s.entities, e, j, 1e-4, loss)), 1e-4);
      }
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(Gradients, NonFiniteValueNamesTerm) {
  Fixture f(1);
  auto s = f.state();
  s.entities.row(0)[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    compute_gradients(s, f.batch(), f.context({true, false, false}));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("L_KGE"), std::string::npos);
  }
  try {
    compute_gradients(s, f.batch(), f.context({false, true, false}));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("L_Bayes"), std::string::npos);
  }
}

TEST(Gradients, UnassignedEntityTriggersReassignment) {
  Fixture f(2);
  auto s = f.state();
  f.clusters.assignment.cluster_of[3] = cluster::kUnassigned;
  EXPECT_NO_THROW(compute_gradients(s, f.batch(), f.context({false, false, true})));
  EXPECT_NE(f.clusters.assignment.of(3), cluster::kUnassigned);
}

// Independent mini-batch TransE loop: same streams, same sampling, no
// prior, no clustering.
EmbeddingTable plain_transe(Fixture& f, TrainState s) {
  auto shuffle_rng = make_stream(f.hp.seed, 0, kStreamShuffle);
  auto neg_rng = make_stream(f.hp.seed, 0, kStreamNegatives);
  std::vector<Triple> order = f.triples;
  AdamConfig adam;
  adam.learning_rate = f.hp.learning_rate;
  std::uint64_t step = 0;
  for (std::size_t ep = 0; ep < f.hp.epochs; ++ep) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t b = 0; b < order.size(); b += f.hp.batch_size) {
      std::vector<TrainingPair> batch;
      for (std::size_t i = b; i < std::min(order.size(), b + f.hp.batch_size); ++i) {
        batch.push_back({order[i], kg::sample_negative(order[i], f.candidates, f.known, neg_rng)});
      }
      auto g = kge_batch_gradients(batch, s.entities, s.relations, f.hp.margin);
      ++step;
      adam_step(s.entities, g.entities, s.entity_moments, adam, step);
      adam_step(s.relations, g.relations, s.relation_moments, adam, step);
    }
  }
  return s.entities;
}

TEST(TrainSnapshot, DegeneratesToPlainTransE) {
  Fixture f(3);
  f.hp.beta = 0.0;
  f.hp.lambda_obs = 0.0;
  auto s = f.state();
  const auto expected = plain_transe(f, s);
  train_snapshot(s, f.context({true, true, false}));
  EXPECT_EQ(s.entities, expected);
}

TEST(TrainSnapshot, LossDecreasesOnToyGraph) {
  Fixture f(4);
  f.hp.epochs = 60;
  auto s = f.state();
  std::vector<double> totals;
  auto ctx = f.context({true, true, true});
  ctx.on_epoch = [&](const EpochRecord& r) { totals.push_back(r.losses.total()); };
  const auto result = train_snapshot(s, ctx);
  ASSERT_EQ(result.epochs.size(), 60u);
  ASSERT_EQ(totals.size(), 60u);
  const double head = std::accumulate(totals.begin(), totals.begin() + 5, 0.0);
  const double tail = std::accumulate(totals.end() - 5, totals.end(), 0.0);
  EXPECT_LT(tail, head);
  EXPECT_EQ(s.loss_ring.size(), 120u);  // 2 batches x 60 epochs
}

TEST(TrainSnapshot, SeedDeterminesResult) {
  Fixture a(5), b(5);
  auto sa = a.state();
  auto sb = b.state();
  train_snapshot(sa, a.context({true, true, true}));
  train_snapshot(sb, b.context({true, true, true}));
  EXPECT_EQ(sa.entities, sb.entities);
  EXPECT_EQ(sa.relations, sb.relations);
}

TEST(TrainState, LossRingIsBounded) {
  TrainState s(2);
  for (int i = 0; i < 1000; ++i) s.record_loss(i);
  EXPECT_EQ(s.loss_ring.size(), TrainState::kLossRing);
}

TEST(Streams, IndependentAndReproducible) {
  auto a = make_stream(7, 1, kStreamShuffle);
  auto b = make_stream(7, 1, kStreamShuffle);
  auto c = make_stream(7, 1, kStreamNegatives);
  auto d = make_stream(7, 2, kStreamShuffle);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

}  // namespace
}  // namespace ckge::train
