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

#include <gtest/gtest.h>

#include "ckge/error.hpp"
#include "support.hpp"

namespace ckge::kg {
namespace {

using ckge::testing::TempDir;
using ckge::testing::read_file;

TEST(Synthetic, SingleSnapshotRoundTrip) {
  SyntheticSpec spec;
  spec.snapshots = 1;
  spec.entities = {5};
  spec.relations = 2;
  spec.triples = {10};
  spec.seed = 4;
  const auto seq = generate_synthetic_sequence(spec);
  EXPECT_EQ(seq.stats(0).entities, 5u);
  EXPECT_EQ(seq.stats(0).triples, 10u);
  TempDir dir("syn1");
  write_snapshot_sequence(seq, dir.path());
  const auto back = load_snapshot_sequence(dir.path());
  EXPECT_EQ(back.stats(0).entities, 5u);
  EXPECT_EQ(back.stats(0).triples, 10u);
  EXPECT_EQ(back.stats(0).relations, seq.stats(0).relations);
}

TEST(Synthetic, HigherRegimeDoubles) {
  SyntheticSpec spec;
  spec.regime = GrowthRegime::kHigher;
  spec.snapshots = 3;
  spec.entities = {8, 12, 16};
  spec.base_triples = 10;
  spec.relations = 3;
  const auto seq = generate_synthetic_sequence(spec);
  EXPECT_EQ(seq.stats(0).triples, 10u);
  EXPECT_EQ(seq.stats(1).triples, 20u);
  EXPECT_EQ(seq.stats(2).triples, 40u);
}

TEST(Synthetic, LowerRegimeHalves) {
  SyntheticSpec spec;
  spec.regime = GrowthRegime::kLower;
  spec.base_triples = 50;
  spec.final_entities = 60;
  EXPECT_EQ(planned_triple_counts(spec), (std::vector<std::size_t>{200, 100, 50}));
}

TEST(Synthetic, SameSeedByteIdenticalFiles) {
  SyntheticSpec spec;
  spec.final_entities = 90;
  spec.base_triples = 200;
  spec.seed = 11;
  TempDir a("syn_a"), b("syn_b");
  write_snapshot_sequence(generate_synthetic_sequence(spec), a.path());
  write_snapshot_sequence(generate_synthetic_sequence(spec), b.path());
  for (const char* f : {"entity2id.txt", "relation2id.txt", "snapshot_0/train.txt",
                        "snapshot_1/valid.txt", "snapshot_2/test.txt"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
}

TEST(Synthetic, SatisfiesSnapshotInvariants) {
  for (auto regime : {GrowthRegime::kEqual, GrowthRegime::kHigher, GrowthRegime::kLower}) {
    SyntheticSpec spec;
    spec.regime = regime;
    spec.snapshots = 4;
    spec.final_entities = 120;
    spec.base_triples = 150;
    spec.seed = 5;
    const auto seq = generate_synthetic_sequence(spec);
    EXPECT_NO_THROW(seq.validate());
    const auto counts = planned_entity_counts(spec);
    for (SnapshotIndex t = 0; t < seq.size(); ++t) {
      const auto st = seq.stats(t);
      EXPECT_EQ(st.entities, counts[t]);
      EXPECT_EQ(st.valid, st.triples / 10);
      EXPECT_EQ(st.test, st.triples / 10);
    }
  }
}

TEST(Synthetic, InfeasibleSpecRejected) {
  SyntheticSpec spec;
  spec.snapshots = 1;
  spec.entities = {2};
  spec.relations = 1;
  spec.triples = {5};  // only 2 * 2 * 1 = 4 distinct triples exist
  EXPECT_THROW(generate_synthetic_sequence(spec), ConfigError);
  EXPECT_THROW(parse_regime("sideways"), ConfigError);
}

}  // namespace
}  // namespace ckge::kg
