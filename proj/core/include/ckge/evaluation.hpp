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

#ifndef CKGE_EVALUATION_HPP_
#define CKGE_EVALUATION_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ckge/embedding_table.hpp"
#include "ckge/kg_core.hpp"
#include "ckge/types.hpp"

namespace ckge::eval {

enum class Protocol { kRaw, kFiltered };

Protocol parse_protocol(const std::string& name);
std::string protocol_name(Protocol p);

enum class Missing { kHead, kTail };

// 1 + #candidates scoring strictly better + #other candidates tying with the
// gold answer. Lower scores are better. `excluded` (may be empty) removes
// candidates; the gold index must never be excluded.
std::size_t rank_from_scores(std::span<const double> scores, std::size_t gold_index,
                             std::span<const std::uint8_t> excluded = {});

// Rank of the gold answer of `gold` with one side blanked. Under the
// filtered protocol candidates forming a triple in `filter` (other than the
// gold triple itself) are skipped.
std::size_t rank_query(const Triple& gold, Missing missing, const EmbeddingTable& entities,
                       const EmbeddingTable& relations, std::span<const EntityId> candidates,
                       const TripleSet* filter, Protocol protocol);

struct Metrics {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::size_t queries = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

Metrics metrics_from_ranks(std::span<const std::size_t> ranks);

// Head and tail query for each test triple.
Metrics link_prediction_metrics(std::span<const Triple> test, const EmbeddingTable& entities,
                                const EmbeddingTable& relations, std::span<const EntityId> candidates,
                                const TripleSet* filter, Protocol protocol);

// Metrics of the model committed at `model_snapshot` on every test split
// j <= model_snapshot, plus their unweighted mean.
struct SnapshotEvaluation {
  SnapshotIndex model_snapshot = 0;
  std::vector<Metrics> per_test;
  Metrics average;

  friend bool operator==(const SnapshotEvaluation&, const SnapshotEvaluation&) = default;
};

struct MetricsReport {
  Protocol protocol = Protocol::kFiltered;
  std::vector<SnapshotEvaluation> snapshots;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

Metrics average_metrics(std::span<const Metrics> items);

// Candidates are the entities of the model snapshot; the filter holds every
// train/valid/test triple up to it.
SnapshotEvaluation continual_evaluate(const EmbeddingTable& entity_means,
                                      const EmbeddingTable& relation_means,
                                      const kg::SnapshotSequence& seq, SnapshotIndex model_snapshot,
                                      Protocol protocol);

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

// Long format: model_snapshot,test_snapshot,metric,value (4 rows per cell).
std::string report_to_csv(const MetricsReport& report);

// Element-wise mean of reports with identical shape (seed sweeps).
MetricsReport average_reports(std::span<const MetricsReport> reports);

}  // namespace ckge::eval

#endif  // CKGE_EVALUATION_HPP_
