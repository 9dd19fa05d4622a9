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

#include "ckge/evaluation.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "ckge/error.hpp"
#include "ckge/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace ckge::eval {
namespace {

using ckge::testing::random_vector;

struct Model {
  EmbeddingTable entities, relations;
  std::vector<std::vector<double>> ent_rows, rel_rows;
};

Model random_model(std::size_t ne, std::size_t nr, std::size_t d, std::mt19937_64& rng) {
  Model m{EmbeddingTable(d), EmbeddingTable(d), {}, {}};
  for (std::uint32_t i = 0; i < ne; ++i) {
    m.ent_rows.push_back(random_vector(d, rng));
    m.entities.set(i, m.ent_rows.back());
  }
  for (std::uint32_t i = 0; i < nr; ++i) {
    m.rel_rows.push_back(random_vector(d, rng));
    m.relations.set(i, m.rel_rows.back());
  }
  return m;
}

TEST(Rank, UniquelyBestIsOne) {
  EmbeddingTable e(1), r(1);
  for (std::uint32_t i = 0; i < 4; ++i) e.set(i, std::vector{double(i)});
  r.set(0, std::vector{1.0});
  const std::vector<EntityId> cands{0, 1, 2, 3};
  EXPECT_EQ(rank_query({0, 0, 1}, Missing::kTail, e, r, cands, nullptr, Protocol::kRaw), 1u);
}

TEST(Rank, IdenticalEmbeddingsArePessimistic) {
  EmbeddingTable e(2), r(2);
  for (std::uint32_t i = 0; i < 6; ++i) e.set(i, std::vector{0.5, 0.5});
  r.set(0, std::vector{0.0, 0.0});
  const std::vector<EntityId> cands{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(rank_query({2, 0, 4}, Missing::kHead, e, r, cands, nullptr, Protocol::kRaw), 6u);
}

TEST(Rank, GoldMustBeCandidateAndNeverFiltered) {
  EXPECT_THROW(rank_from_scores(std::vector{1.0, 2.0}, 0, std::vector<std::uint8_t>{1, 0}), Error);
  EXPECT_EQ(rank_from_scores(std::vector{1.0, 0.5, 1.0, 3.0}, 0), 3u);
  EmbeddingTable e(1), r(1);
  e.set(0, std::vector{0.0});
  e.set(1, std::vector{1.0});
  r.set(0, std::vector{0.0});
  EXPECT_THROW(rank_query({0, 0, 1}, Missing::kTail, e, r, std::vector<EntityId>{0}, nullptr, Protocol::kRaw),
               ConfigError);
}

TEST(Rank, ToyGraphMatchesExhaustiveScoring) {
  std::mt19937_64 rng(12);
  const auto m = random_model(5, 2, 3, rng);
  const std::vector<EntityId> cands{0, 1, 2, 3, 4};
  const std::vector<Triple> test{{0, 0, 1}, {2, 1, 3}, {4, 0, 0}, {3, 1, 3}};
  const TripleSet filter{{0, 0, 1}, {0, 0, 2}, {2, 1, 3}, {2, 1, 4}, {4, 0, 0}, {3, 1, 3}, {1, 1, 3}};
  for (const auto& t : test) {
    for (auto proto : {Protocol::kRaw, Protocol::kFiltered}) {
      const TripleSet* f = proto == Protocol::kFiltered ? &filter : nullptr;
      EXPECT_EQ(rank_query(t, Missing::kHead, m.entities, m.relations, cands, &filter, proto),
                oracle::brute_force_rank(t, true, m.ent_rows, m.rel_rows, cands, f));
      EXPECT_EQ(rank_query(t, Missing::kTail, m.entities, m.relations, cands, &filter, proto),
                oracle::brute_force_rank(t, false, m.ent_rows, m.rel_rows, cands, f));
    }
  }
}

TEST(Rank, FilteredNeverWorseThanRawAndMonotoneInvariant) {
  std::mt19937_64 rng(13);
  for (int c = 0; c < 30; ++c) {
    const auto m = random_model(20, 3, 4, rng);
    std::vector<EntityId> cands(20);
    std::iota(cands.begin(), cands.end(), 0);
    std::uniform_int_distribution<EntityId> pe(0, 19);
    TripleSet filter;
    for (int i = 0; i < 60; ++i) filter.insert({pe(rng), static_cast<RelationId>(i % 3), pe(rng)});
    const Triple gold = *filter.begin();
    for (auto miss : {Missing::kHead, Missing::kTail}) {
      EXPECT_LE(rank_query(gold, miss, m.entities, m.relations, cands, &filter, Protocol::kFiltered),
                rank_query(gold, miss, m.entities, m.relations, cands, &filter, Protocol::kRaw));
    }
    // exp is strictly monotone: ranks from transformed scores agree.
    std::vector<double> scores = random_vector(15, rng);
    scores[3] = scores[7];
    std::vector<double> transformed(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) transformed[i] = std::exp(3.0 * scores[i]) + 1.0;
    for (std::size_t g = 0; g < scores.size(); ++g) {
      EXPECT_EQ(rank_from_scores(scores, g), rank_from_scores(transformed, g));
    }
  }
}

TEST(Metrics, FormulaExamples) {
  const std::vector<std::size_t> ones{1, 1, 1};
  const auto perfect = metrics_from_ranks(ones);
  EXPECT_EQ(perfect.mrr, 1.0);
  EXPECT_EQ(perfect.hits1, 1.0);
  EXPECT_EQ(perfect.hits10, 1.0);
  const auto m = metrics_from_ranks(std::vector<std::size_t>{1, 4});
  EXPECT_DOUBLE_EQ(m.mrr, 0.625);
  EXPECT_DOUBLE_EQ(m.hits3, 0.5);
  EXPECT_DOUBLE_EQ(m.hits10, 1.0);
  EmbeddingTable e(1), r(1);
  EXPECT_THROW(link_prediction_metrics({}, e, r, {}, nullptr, Protocol::kRaw), ConfigError);
}

TEST(Metrics, AverageIsUnweighted) {
  Metrics a, b;
  a.mrr = 0.4;
  a.queries = 10;
  b.mrr = 0.6;
  b.queries = 1000;
  const std::vector<Metrics> both{a, b};
  EXPECT_DOUBLE_EQ(average_metrics(both).mrr, 0.5);
}

TEST(Metrics, MatchBruteForceOnFiftyEntityGraph) {
  kg::SyntheticSpec spec;
  spec.snapshots = 1;
  spec.entities = {50};
  spec.triples = {300};
  spec.relations = 5;
  spec.seed = 21;
  const auto seq = kg::generate_synthetic_sequence(spec);
  std::mt19937_64 rng(22);
  const auto m = random_model(50, seq.vocab.relation_count(), 6, rng);
  const auto filter = seq.cumulative_triples(0);
  const auto& cands = seq.at(0).entities;
  for (auto proto : {Protocol::kRaw, Protocol::kFiltered}) {
    const auto got = link_prediction_metrics(seq.at(0).test, m.entities, m.relations, cands, &filter, proto);
    std::vector<std::size_t> ranks;
    const TripleSet* f = proto == Protocol::kFiltered ? &filter : nullptr;
    for (const auto& t : seq.at(0).test) {
      ranks.push_back(oracle::brute_force_rank(t, true, m.ent_rows, m.rel_rows, cands, f));
      ranks.push_back(oracle::brute_force_rank(t, false, m.ent_rows, m.rel_rows, cands, f));
    }
    double mrr = 0;
    for (auto k : ranks) mrr += 1.0 / double(k);
    mrr /= double(ranks.size());
    EXPECT_NEAR(got.mrr, mrr, 1e-12);
    EXPECT_LE(got.hits1, got.hits3);
    EXPECT_LE(got.hits3, got.hits10);
  }
}

TEST(Continual, HeadlineIsMeanOverSeenTestSets) {
  kg::SyntheticSpec spec;
  spec.final_entities = 60;
  spec.base_triples = 120;
  spec.seed = 2;
  const auto seq = kg::generate_synthetic_sequence(spec);
  std::mt19937_64 rng(3);
  const auto m = random_model(seq.vocab.entity_count(), seq.vocab.relation_count(), 4, rng);
  const auto first = continual_evaluate(m.entities, m.relations, seq, 0, Protocol::kFiltered);
  ASSERT_EQ(first.per_test.size(), 1u);
  EXPECT_EQ(first.average, first.per_test[0]);
  const auto last = continual_evaluate(m.entities, m.relations, seq, 2, Protocol::kFiltered);
  ASSERT_EQ(last.per_test.size(), 3u);
  EXPECT_NEAR(last.average.mrr, (last.per_test[0].mrr + last.per_test[1].mrr + last.per_test[2].mrr) / 3, 1e-15);
  EXPECT_LE(last.average.hits1, last.average.hits10);
}

TEST(Report, JsonRoundTripAndCsvShape) {
  MetricsReport rep;
  rep.protocol = Protocol::kRaw;
  for (SnapshotIndex i = 0; i < 3; ++i) {
    SnapshotEvaluation s;
    s.model_snapshot = i;
    for (SnapshotIndex j = 0; j <= i; ++j) {
      Metrics m;
      m.mrr = 0.1 * double(i + 1) + 0.01 * double(j);
      m.hits1 = 0.1;
      m.hits3 = 0.2;
      m.hits10 = 1.0 / 3.0;
      m.queries = 10 + j;
      s.per_test.push_back(m);
    }
    s.average = average_metrics(s.per_test);
    rep.snapshots.push_back(s);
  }
  EXPECT_EQ(report_from_json(report_to_json(rep)), rep);
  const auto csv = report_to_csv(rep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + (1 + 2 + 3) * 4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model_snapshot,test_snapshot,metric,value");
  EXPECT_THROW(report_from_json("{not json"), DataError);
}

}  // namespace
}  // namespace ckge::eval
