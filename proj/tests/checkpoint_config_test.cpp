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

#include <gtest/gtest.h>

#include "ckge/checkpoint.hpp"
#include "ckge/error.hpp"
#include "ckge/hash.hpp"
#include "ckge/run_config.hpp"
#include "support.hpp"

namespace ckge {
namespace {

using ckge::testing::TempDir;
using ckge::testing::read_file;
using ckge::testing::write_file;

bayes::BayesianStore sample_store() {
  bayes::BayesianStore store(3);
  std::mt19937_64 rng(5);
  bayes::init_new_ids(store.entities, std::vector<bayes::Id>{0, 1, 2, 3}, 0.01, rng);
  bayes::init_new_ids(store.relations, std::vector<bayes::Id>{0, 1}, 0.01, rng);
  store.entities.mean(2)[1] = 1.0 / 3.0;
  store.entities.precision(1)[0] = 1e-300;
  store.relations.mean(0)[2] = -0.0;
  return store;
}

TEST(Hash, DoubleTextRoundTripsExactly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, double(i % 40) - 20.0);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_THROW(parse_double("1.5x"), DataError);
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Checkpoint, RoundTripIsBitExact) {
  TempDir dir("ckpt");
  const auto store = sample_store();
  CheckpointMeta meta;
  meta.snapshot = 2;
  meta.vocabulary = "abc123";
  meta.hyperparameters = to_settings(Hyperparameters{});
  save_checkpoint(dir / "a.ckpt", store, meta);
  const auto back = load_checkpoint(dir / "a.ckpt");
  EXPECT_EQ(back.store, store);
  EXPECT_EQ(back.meta.snapshot, 2u);
  EXPECT_EQ(back.meta.vocabulary, "abc123");
  EXPECT_EQ(back.meta.hyperparameters, meta.hyperparameters);
  EXPECT_TRUE(std::signbit(back.store.relations.mean(0)[2]));
}

TEST(Checkpoint, TruncatedOrCorruptedIsRefused) {
  TempDir dir("ckpt_bad");
  save_checkpoint(dir / "a.ckpt", sample_store(), CheckpointMeta{});
  const auto text = read_file(dir / "a.ckpt");
  write_file(dir / "cut.ckpt", text.substr(0, text.size() / 2));
  EXPECT_THROW(load_checkpoint(dir / "cut.ckpt"), DataError);
  auto flipped = text;
  flipped[text.size() / 3] = flipped[text.size() / 3] == '1' ? '2' : '1';
  write_file(dir / "flip.ckpt", flipped);
  EXPECT_THROW(load_checkpoint(dir / "flip.ckpt"), DataError);
  EXPECT_THROW(load_checkpoint(dir / "absent.ckpt"), DataError);
  write_file(dir / "empty.ckpt", "");
  EXPECT_THROW(load_checkpoint(dir / "empty.ckpt"), DataError);
}

TEST(Config, ParseSettingsAndComments) {
  const auto s = parse_settings("# grid cell\n dim = 16 \n\nbeta=0.5 # weaker\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (Setting{"dim", "16"}));
  EXPECT_EQ(s[1], (Setting{"beta", "0.5"}));
  EXPECT_THROW(parse_settings("dim 16\n"), ConfigError);
}

TEST(Config, SettingsRoundTrip) {
  RunConfig c;
  apply_setting(c, "synthetic.regime", "higher");
  apply_setting(c, "synthetic.seed", "9");
  apply_setting(c, "synthetic.entity_counts", "10,20,30");
  apply_setting(c, "lambda_obs_relation", "0.25");
  apply_setting(c, "tau", "0.7");
  apply_setting(c, "disable_fcc", "true");
  apply_setting(c, "protocol", "raw");
  RunConfig d;
  for (const auto& [k, v] : to_settings(c)) apply_setting(d, k, v);
  EXPECT_EQ(to_settings(c), to_settings(d));
  EXPECT_EQ(d.synthetic->entities, (std::vector<std::size_t>{10, 20, 30}));
  EXPECT_EQ(d.hp.relation_lambda_obs(), 0.25);
  EXPECT_TRUE(d.synthetic_seed_explicit);
}

TEST(Config, InvalidValuesRejected) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "no_such_key", "1"), ConfigError);
  EXPECT_THROW(apply_setting(c, "dim", "-3"), ConfigError);
  EXPECT_THROW(apply_setting(c, "disable_bayes", "maybe"), ConfigError);
  EXPECT_THROW(c.validate(), ConfigError);  // no data source
  c.data_root = "x";
  c.synthetic.emplace();
  EXPECT_THROW(c.validate(), ConfigError);  // two data sources
  c.synthetic.reset();
  for (const auto& [k, v] : std::vector<Setting>{{"tau", "0"}, {"lambda_init", "0"}, {"clusters", "0"},
                                                  {"eta", "1.5"}, {"dim", "0"}, {"lambda_obs", "-1"},
                                                  {"margin", "-1"}}) {
    RunConfig bad = c;
    apply_setting(bad, k, v);
    EXPECT_THROW(bad.validate(), ConfigError) << k;
  }
}

}  // namespace
}  // namespace ckge
