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

#ifndef CKGE_EXPERIMENT_HPP_
#define CKGE_EXPERIMENT_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ckge/bayesian_store.hpp"
#include "ckge/clustering.hpp"
#include "ckge/evaluation.hpp"
#include "ckge/kg_core.hpp"
#include "ckge/run_config.hpp"
#include "ckge/trainer.hpp"

namespace ckge::exp {

// Hooks into the snapshot loop. All optional.
struct PipelineObserver {
  std::function<void(const train::EpochRecord&)> on_epoch;
  // Called after commit and evaluation of snapshot t. `clusters` is null
  // when the contrastive term is disabled.
  std::function<void(SnapshotIndex t, const bayes::BayesianStore& store,
                     const cluster::ClusterState* clusters, const train::TrainState& trained,
                     const eval::SnapshotEvaluation& evaluation)>
      on_snapshot;
};

// For t = 0..N: fresh priors for new ids, cluster refresh, joint training,
// commit, continual evaluation.
eval::MetricsReport run_pipeline(const kg::SnapshotSequence& seq, const RunConfig& config,
                                 const PipelineObserver& observer = {});

// Materialises the configured data source (loading or generating).
kg::SnapshotSequence resolve_dataset(const RunConfig& config);

struct TrainOutcome {
  std::filesystem::path run_dir;
  eval::MetricsReport report;
};

// Full run with artifacts under config.output_dir:
//   config.txt, data/ (synthetic only), checkpoints/snapshot_<t>.ckpt,
//   clusters/snapshot_<t>.tsv, train_log.jsonl, metrics.json, metrics.csv,
//   manifest.json (content hashes of every other file).
// On failure the manifest records the failing snapshot and the error is
// rethrown.
TrainOutcome run_training(const RunConfig& config, std::ostream* progress = nullptr);

// `seeds` runs with seeds hp.seed, hp.seed + 1, ... under
// <output>/seed_<s>/, plus <output>/metrics_mean.json.
TrainOutcome run_seed_sweep(const RunConfig& config, std::size_t seeds,
                            std::ostream* progress = nullptr);

// Recomputes the continual evaluation stored in a checkpoint. Refuses
// (DataError) on manifest hash or vocabulary fingerprint mismatch.
eval::MetricsReport run_eval(const std::filesystem::path& checkpoint,
                             const std::filesystem::path& data_root, eval::Protocol protocol);

struct Comparison {
  std::string text;  // per-snapshot tables, best value per column marked '*'
  std::string csv;   // run,model_snapshot,test_snapshot,metric,value
  std::size_t csv_rows = 0;
};

Comparison run_report(std::span<const std::filesystem::path> run_dirs);

// Throws DataError unless `file` is listed in run_dir/manifest.json with a
// matching hash. Returns false when there is no manifest at all.
bool verify_manifest_entry(const std::filesystem::path& run_dir, const std::filesystem::path& file);

}  // namespace ckge::exp

#endif  // CKGE_EXPERIMENT_HPP_
