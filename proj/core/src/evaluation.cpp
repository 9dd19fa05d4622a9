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

#include <json.hpp>
#include <sstream>

#include "ckge/error.hpp"
#include "ckge/hash.hpp"
#include "ckge/scoring.hpp"

namespace ckge::eval {

using nlohmann::json;

Protocol parse_protocol(const std::string& name) {
  if (name == "filtered") return Protocol::kFiltered;
  if (name == "raw") return Protocol::kRaw;
  throw ConfigError("unknown protocol '" + name + "' (expected raw|filtered)");
}

std::string protocol_name(Protocol p) { return p == Protocol::kRaw ? "raw" : "filtered"; }

std::size_t rank_from_scores(std::span<const double> scores, std::size_t gold_index,
                             std::span<const std::uint8_t> excluded) {
  if (gold_index >= scores.size()) throw ConfigError("rank_from_scores: gold index out of range");
  if (!excluded.empty() && excluded[gold_index]) {
    throw Error("internal error: the gold answer was filtered out");
  }
  const double gold = scores[gold_index];
  std::size_t rank = 1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == gold_index || (!excluded.empty() && excluded[i])) continue;
    if (scores[i] <= gold) ++rank;
  }
  return rank;
}

std::size_t rank_query(const Triple& gold, Missing missing, const EmbeddingTable& entities,
                       const EmbeddingTable& relations, std::span<const EntityId> candidates,
                       const TripleSet* filter, Protocol protocol) {
  const auto r = relations.row(gold.relation);
  const EntityId answer = missing == Missing::kHead ? gold.head : gold.tail;
  auto score_of = [&](EntityId c) {
    return missing == Missing::kHead ? train::transe_score(entities.row(c), r, entities.row(gold.tail))
                                     : train::transe_score(entities.row(gold.head), r, entities.row(c));
  };
  const double gold_score = score_of(answer);
  const bool filtered = protocol == Protocol::kFiltered && filter != nullptr;
  bool seen_gold = false;
  std::size_t rank = 1;
  for (EntityId c : candidates) {
    if (c == answer) {
      seen_gold = true;
      continue;
    }
    if (filtered) {
      Triple alt = gold;
      (missing == Missing::kHead ? alt.head : alt.tail) = c;
      if (filter->contains(alt)) continue;
    }
    if (score_of(c) <= gold_score) ++rank;
  }
  if (!seen_gold) throw ConfigError("rank_query: gold answer is not among the candidates");
  return rank;
}

Metrics metrics_from_ranks(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw ConfigError("metrics: no ranks");
  Metrics m;
  for (auto rank : ranks) {
    m.mrr += 1.0 / static_cast<double>(rank);
    m.hits1 += rank <= 1 ? 1.0 : 0.0;
    m.hits3 += rank <= 3 ? 1.0 : 0.0;
    m.hits10 += rank <= 10 ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(ranks.size());
  m.mrr /= n;
  m.hits1 /= n;
  m.hits3 /= n;
  m.hits10 /= n;
  m.queries = ranks.size();
  return m;
}

Metrics link_prediction_metrics(std::span<const Triple> test, const EmbeddingTable& entities,
                                const EmbeddingTable& relations, std::span<const EntityId> candidates,
                                const TripleSet* filter, Protocol protocol) {
  if (test.empty()) throw ConfigError("link prediction on an empty test set");
  std::vector<std::size_t> ranks;
  ranks.reserve(test.size() * 2);
  for (const auto& tr : test) {
    ranks.push_back(rank_query(tr, Missing::kHead, entities, relations, candidates, filter, protocol));
    ranks.push_back(rank_query(tr, Missing::kTail, entities, relations, candidates, filter, protocol));
  }
  return metrics_from_ranks(ranks);
}

Metrics average_metrics(std::span<const Metrics> items) {
  if (items.empty()) throw ConfigError("average of zero metric sets");
  Metrics m;
  for (const auto& x : items) {
    m.mrr += x.mrr;
    m.hits1 += x.hits1;
    m.hits3 += x.hits3;
    m.hits10 += x.hits10;
    m.queries += x.queries;
  }
  const double n = static_cast<double>(items.size());
  m.mrr /= n;
  m.hits1 /= n;
  m.hits3 /= n;
  m.hits10 /= n;
  return m;
}

SnapshotEvaluation continual_evaluate(const EmbeddingTable& entity_means,
                                      const EmbeddingTable& relation_means,
                                      const kg::SnapshotSequence& seq, SnapshotIndex model_snapshot,
                                      Protocol protocol) {
  const auto& model = seq.at(model_snapshot);
  const TripleSet filter = seq.cumulative_triples(model_snapshot);
  SnapshotEvaluation out;
  out.model_snapshot = model_snapshot;
  for (SnapshotIndex j = 0; j <= model_snapshot; ++j) {
    out.per_test.push_back(link_prediction_metrics(seq.at(j).test, entity_means, relation_means,
                                                   model.entities, &filter, protocol));
  }
  out.average = average_metrics(out.per_test);
  return out;
}

namespace {

json metrics_json(const Metrics& m) {
  return json{{"mrr", m.mrr}, {"hits@1", m.hits1}, {"hits@3", m.hits3}, {"hits@10", m.hits10},
              {"queries", m.queries}};
}

Metrics metrics_from(const json& j) {
  Metrics m;
  m.mrr = j.at("mrr").get<double>();
  m.hits1 = j.at("hits@1").get<double>();
  m.hits3 = j.at("hits@3").get<double>();
  m.hits10 = j.at("hits@10").get<double>();
  m.queries = j.at("queries").get<std::size_t>();
  return m;
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
  json snaps = json::array();
  for (const auto& s : report.snapshots) {
    json per = json::array();
    for (std::size_t j = 0; j < s.per_test.size(); ++j) {
      json cell = metrics_json(s.per_test[j]);
      cell["test_snapshot"] = j;
      per.push_back(cell);
    }
    snaps.push_back(json{{"model_snapshot", s.model_snapshot},
                         {"per_test", per},
                         {"average", metrics_json(s.average)}});
  }
  json root{{"protocol", protocol_name(report.protocol)}, {"snapshots", snaps}};
  return root.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  try {
    const json root = json::parse(text);
    MetricsReport r;
    r.protocol = parse_protocol(root.at("protocol").get<std::string>());
    for (const auto& s : root.at("snapshots")) {
      SnapshotEvaluation e;
      e.model_snapshot = s.at("model_snapshot").get<SnapshotIndex>();
      for (const auto& cell : s.at("per_test")) e.per_test.push_back(metrics_from(cell));
      e.average = metrics_from(s.at("average"));
      r.snapshots.push_back(std::move(e));
    }
    return r;
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed metrics report: ") + ex.what());
  }
}

std::string report_to_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "model_snapshot,test_snapshot,metric,value\n";
  for (const auto& s : report.snapshots) {
    for (std::size_t j = 0; j < s.per_test.size(); ++j) {
      const auto& m = s.per_test[j];
      const std::pair<const char*, double> rows[] = {
          {"mrr", m.mrr}, {"hits@1", m.hits1}, {"hits@3", m.hits3}, {"hits@10", m.hits10}};
      for (const auto& [name, value] : rows) {
        out << s.model_snapshot << ',' << j << ',' << name << ',' << format_double(value) << '\n';
      }
    }
  }
  return out.str();
}

MetricsReport average_reports(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw ConfigError("no reports to average");
  MetricsReport out = reports.front();
  for (const auto& r : reports) {
    if (r.protocol != out.protocol || r.snapshots.size() != out.snapshots.size()) {
      throw ConfigError("reports have different shapes");
    }
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
      if (r.snapshots[i].per_test.size() != out.snapshots[i].per_test.size()) {
        throw ConfigError("reports have different shapes");
      }
    }
  }
  for (std::size_t i = 0; i < out.snapshots.size(); ++i) {
    auto& dst = out.snapshots[i];
    for (std::size_t j = 0; j < dst.per_test.size(); ++j) {
      std::vector<Metrics> cell;
      for (const auto& r : reports) cell.push_back(r.snapshots[i].per_test[j]);
      dst.per_test[j] = average_metrics(cell);
      dst.per_test[j].queries = cell.front().queries;
    }
    dst.average = average_metrics(dst.per_test);
  }
  return out;
}

}  // namespace ckge::eval
