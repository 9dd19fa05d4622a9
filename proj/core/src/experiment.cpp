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

#include "ckge/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "ckge/checkpoint.hpp"
#include "ckge/error.hpp"
#include "ckge/graph.hpp"
#include "ckge/hash.hpp"

namespace ckge::exp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename Id>
std::vector<Id> missing_ids(std::span<const Id> ids, const bayes::GaussianEmbeddingTable& table) {
  std::vector<Id> out;
  for (Id id : ids) {
    if (!table.contains(id)) out.push_back(id);
  }
  return out;
}

void observed_ids(std::span<const Triple> triples, std::vector<EntityId>& entities,
                  std::vector<RelationId>& relations) {
  std::set<EntityId> e;
  std::set<RelationId> r;
  for (const auto& t : triples) {
    e.insert(t.head);
    e.insert(t.tail);
    r.insert(t.relation);
  }
  entities.assign(e.begin(), e.end());
  relations.assign(r.begin(), r.end());
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_manifest(const fs::path& run_dir, const RunConfig& config, const std::string& status,
                    std::optional<SnapshotIndex> failed_at, const std::string& error) {
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    auto rel = fs::relative(entry.path(), run_dir).generic_string();
    if (rel == "manifest.json") continue;
    files.push_back(std::move(rel));
  }
  std::sort(files.begin(), files.end());
  json listing = json::array();
  for (const auto& f : files) listing.push_back({{"path", f}, {"fnv1a64", hash_file(run_dir / f)}});
  json cfg = json::object();
  for (const auto& [k, v] : to_settings(config)) cfg[k] = v;
  json root{{"format", 1}, {"status", status}, {"seed", config.hp.seed}, {"config", cfg}, {"files", listing}};
  if (failed_at) {
    root["failed_snapshot"] = *failed_at;
    root["error"] = error;
  }
  write_text(run_dir / "manifest.json", root.dump(2) + "\n");
}

std::string cluster_dump(const kg::SnapshotSequence& seq, SnapshotIndex t,
                         const cluster::ClusterState& st) {
  std::ostringstream out;
  out << "entity\timportance\tcluster\n";
  for (EntityId e : seq.at(t).entities) {
    const double ie = e < st.importance.size() ? st.importance[e] : 0.0;
    const auto k = st.assignment.of(e);
    out << seq.vocab.entity_name(e) << '\t' << format_double(ie) << '\t'
        << (k == cluster::kUnassigned ? std::string("-1") : std::to_string(k)) << '\n';
  }
  return out.str();
}

}  // namespace

kg::SnapshotSequence resolve_dataset(const RunConfig& config) {
  config.validate();
  if (config.data_root) return kg::load_snapshot_sequence(*config.data_root);
  auto spec = *config.synthetic;
  if (!config.synthetic_seed_explicit) spec.seed = config.hp.seed;
  return kg::generate_synthetic_sequence(spec);
}

eval::MetricsReport run_pipeline(const kg::SnapshotSequence& seq, const RunConfig& config,
                                 const PipelineObserver& observer) {
  const auto& hp = config.hp;
  hp.validate();
  bayes::BayesianStore store(hp.dim);
  std::optional<cluster::ClusterState> previous;
  eval::MetricsReport report;
  report.protocol = config.protocol;
  std::vector<Triple> cumulative_train;

  for (SnapshotIndex t = 0; t < seq.size(); ++t) {
    const auto& snap = seq.at(t);

    auto init_rng = train::make_stream(hp.seed, t, train::kStreamInit);
    bayes::init_new_ids(store.entities, missing_ids<EntityId>(snap.entities, store.entities),
                        hp.lambda_init, init_rng);
    bayes::init_new_ids(store.relations, missing_ids<RelationId>(snap.relations, store.relations),
                        hp.lambda_init, init_rng);

    const auto triples = kg::training_triples(seq, t);
    cumulative_train.insert(cumulative_train.end(), snap.train.begin(), snap.train.end());
    const TripleSet known(cumulative_train.begin(), cumulative_train.end());

    auto state = train::TrainState::from_prior(store, snap.entities, snap.relations);

    std::optional<cluster::ClusterState> clusters;
    if (!config.disable_fcc) {
      const auto graph = cluster::AdjacencyGraph::from_triples(snap.entities, cumulative_train);
      cluster::ClusterBuildOptions opts;
      opts.clusters = hp.clusters;
      auto pivot_rng = train::make_stream(hp.seed, t, train::kStreamPivots);
      opts.betweenness = cluster::betweenness_policy(graph.node_count(), hp.exact_betweenness_limit,
                                                     hp.betweenness_pivots, pivot_rng());
      auto proxy_rng = train::make_stream(hp.seed, t, train::kStreamProxies);
      clusters = cluster::build_cluster_state(graph, snap.entities.size(), state.entities,
                                              previous ? &*previous : nullptr, opts, proxy_rng);
    }

    train::TrainContext ctx;
    ctx.snapshot = t;
    ctx.triples = triples;
    ctx.candidates = snap.entities;
    ctx.known = &known;
    ctx.prior = &store;
    ctx.clusters = clusters ? &*clusters : nullptr;
    ctx.hp = hp;
    ctx.switches = {true, !config.disable_bayes, !config.disable_fcc};
    ctx.freeze_old_centroids = config.freeze_old_centroids;
    ctx.on_epoch = observer.on_epoch;
    train::train_snapshot(state, ctx);

    std::vector<EntityId> seen_entities;
    std::vector<RelationId> seen_relations;
    observed_ids(triples, seen_entities, seen_relations);
    if (config.disable_bayes) {
      bayes::overwrite_commit(store.entities, state.entities, seen_entities);
      bayes::overwrite_commit(store.relations, state.relations, seen_relations);
    } else {
      bayes::snapshot_commit(store.entities, state.entities, seen_entities, hp.lambda_obs);
      bayes::snapshot_commit(store.relations, state.relations, seen_relations, hp.relation_lambda_obs());
    }

    auto evaluation = eval::continual_evaluate(store.entities.means(), store.relations.means(), seq, t,
                                               config.protocol);
    if (observer.on_snapshot) {
      observer.on_snapshot(t, store, clusters ? &*clusters : nullptr, state, evaluation);
    }
    report.snapshots.push_back(std::move(evaluation));
    if (clusters) previous = std::move(clusters);
  }
  return report;
}

TrainOutcome run_training(const RunConfig& config, std::ostream* progress) {
  config.validate();
  const fs::path run_dir = config.output_dir;
  fs::create_directories(run_dir);
  write_text(run_dir / "config.txt", format_settings(to_settings(config)));

  std::optional<SnapshotIndex> current;
  try {
    kg::SnapshotSequence seq;
    if (config.synthetic) {
      kg::write_snapshot_sequence(resolve_dataset(config), run_dir / "data");
      seq = kg::load_snapshot_sequence(run_dir / "data");
    } else {
      seq = resolve_dataset(config);
    }
    if (progress) {
      for (const auto& w : seq.warnings) *progress << "warning: " << w << '\n';
    }

    std::ofstream log(run_dir / "train_log.jsonl", std::ios::binary | std::ios::trunc);
    PipelineObserver obs;
    obs.on_epoch = [&](const train::EpochRecord& r) {
      current = r.snapshot;
      json line{{"snapshot", r.snapshot},        {"epoch", r.epoch},
                {"L_KGE", r.losses.kge},         {"L_Bayes", r.losses.bayes},
                {"L_FCC", r.losses.fcc},         {"L_total", r.losses.total()},
                {"wall_time", r.wall_seconds}};
      log << line.dump() << '\n';
    };
    obs.on_snapshot = [&](SnapshotIndex t, const bayes::BayesianStore& store,
                          const cluster::ClusterState* clusters, const train::TrainState&,
                          const eval::SnapshotEvaluation& e) {
      current = t;
      CheckpointMeta meta;
      meta.snapshot = t;
      meta.vocabulary = seq.vocab.fingerprint();
      meta.hyperparameters = to_settings(config.hp);
      save_checkpoint(run_dir / "checkpoints" / ("snapshot_" + std::to_string(t) + ".ckpt"), store, meta);
      if (clusters) {
        write_text(run_dir / "clusters" / ("snapshot_" + std::to_string(t) + ".tsv"),
                   cluster_dump(seq, t, *clusters));
      }
      if (progress) {
        *progress << "snapshot " << t << ": average MRR " << format_double(e.average.mrr)
                  << ", Hits@10 " << format_double(e.average.hits10) << '\n';
      }
    };

    auto report = run_pipeline(seq, config, obs);
    log.close();
    write_text(run_dir / "metrics.json", eval::report_to_json(report));
    write_text(run_dir / "metrics.csv", eval::report_to_csv(report));
    write_manifest(run_dir, config, "complete", std::nullopt, "");
    return {run_dir, std::move(report)};
  } catch (const std::exception& e) {
    write_manifest(run_dir, config, "failed", current.value_or(0), e.what());
    throw;
  }
}

TrainOutcome run_seed_sweep(const RunConfig& config, std::size_t seeds, std::ostream* progress) {
  if (seeds == 0) throw ConfigError("--seeds must be >= 1");
  std::vector<eval::MetricsReport> reports;
  for (std::size_t i = 0; i < seeds; ++i) {
    RunConfig c = config;
    c.hp.seed = config.hp.seed + i;
    c.output_dir = config.output_dir / ("seed_" + std::to_string(c.hp.seed));
    if (progress) *progress << "== seed " << c.hp.seed << '\n';
    reports.push_back(run_training(c, progress).report);
  }
  auto mean = eval::average_reports(reports);
  write_text(config.output_dir / "metrics_mean.json", eval::report_to_json(mean));
  write_text(config.output_dir / "metrics_mean.csv", eval::report_to_csv(mean));
  return {config.output_dir, std::move(mean)};
}

bool verify_manifest_entry(const fs::path& run_dir, const fs::path& file) {
  const auto manifest_path = run_dir / "manifest.json";
  if (!fs::exists(manifest_path)) return false;
  json root;
  try {
    root = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw DataError("malformed manifest " + manifest_path.string() + ": " + e.what());
  }
  const auto rel = fs::relative(fs::absolute(file), fs::absolute(run_dir)).generic_string();
  for (const auto& entry : root.value("files", json::array())) {
    if (entry.value("path", "") != rel) continue;
    const auto actual = hash_file(file);
    if (entry.value("fnv1a64", "") != actual) {
      throw DataError("content hash mismatch for " + rel + ": manifest " +
                      entry.value("fnv1a64", "") + ", file " + actual);
    }
    return true;
  }
  throw DataError(rel + " is not listed in " + manifest_path.string());
}

eval::MetricsReport run_eval(const fs::path& checkpoint, const fs::path& data_root,
                             eval::Protocol protocol) {
  const auto run_dir = checkpoint.parent_path().parent_path();
  if (checkpoint.parent_path().filename() == "checkpoints") verify_manifest_entry(run_dir, checkpoint);
  const auto cp = load_checkpoint(checkpoint);
  const auto seq = kg::load_snapshot_sequence(data_root);
  if (seq.vocab.fingerprint() != cp.meta.vocabulary) {
    throw DataError("checkpoint vocabulary " + cp.meta.vocabulary + " does not match dataset " +
                    seq.vocab.fingerprint() + " at " + data_root.string());
  }
  eval::MetricsReport report;
  report.protocol = protocol;
  for (SnapshotIndex t = 0; t <= cp.meta.snapshot; ++t) {
    // Only the committed model of the checkpoint's own snapshot is available;
    // earlier rows come from sibling checkpoints when present.
    const auto sibling = checkpoint.parent_path() / ("snapshot_" + std::to_string(t) + ".ckpt");
    if (t == cp.meta.snapshot) {
      report.snapshots.push_back(eval::continual_evaluate(cp.store.entities.means(),
                                                          cp.store.relations.means(), seq, t, protocol));
    } else if (fs::exists(sibling)) {
      if (checkpoint.parent_path().filename() == "checkpoints") verify_manifest_entry(run_dir, sibling);
      const auto other = load_checkpoint(sibling);
      if (other.meta.vocabulary != cp.meta.vocabulary || other.meta.snapshot != t) {
        throw DataError("sibling checkpoint " + sibling.string() + " is inconsistent");
      }
      report.snapshots.push_back(eval::continual_evaluate(other.store.entities.means(),
                                                          other.store.relations.means(), seq, t, protocol));
    }
  }
  return report;
}

Comparison run_report(std::span<const fs::path> run_dirs) {
  if (run_dirs.empty()) throw ConfigError("report needs at least one run directory");
  std::vector<std::string> names;
  std::vector<eval::MetricsReport> reports;
  for (const auto& dir : run_dirs) {
    reports.push_back(eval::report_from_json(read_text(dir / "metrics.json")));
    auto name = dir.filename().string();
    if (name.empty()) name = dir.parent_path().filename().string();
    names.push_back(name);
  }
  // Disambiguate duplicate leaf names with the full path.
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (std::count(names.begin(), names.end(), names[i]) > 1) names[i] = run_dirs[i].string();
  }

  Comparison out;
  std::ostringstream csv;
  csv << "run,model_snapshot,test_snapshot,metric,value\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    for (const auto& s : reports[r].snapshots) {
      for (std::size_t j = 0; j < s.per_test.size(); ++j) {
        const auto& m = s.per_test[j];
        const std::pair<const char*, double> rows[] = {
            {"mrr", m.mrr}, {"hits@1", m.hits1}, {"hits@3", m.hits3}, {"hits@10", m.hits10}};
        for (const auto& [metric, value] : rows) {
          csv << names[r] << ',' << s.model_snapshot << ',' << j << ',' << metric << ','
              << format_double(value) << '\n';
          ++out.csv_rows;
        }
      }
    }
  }
  out.csv = csv.str();

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  auto metric_values = [](const eval::Metrics& m) {
    return std::array<double, 4>{m.mrr, m.hits1, m.hits3, m.hits10};
  };

  std::ostringstream text;
  const bool joint = std::all_of(reports.begin(), reports.end(), [&](const auto& rep) {
    return rep.snapshots.size() == reports.front().snapshots.size() &&
           rep.protocol == reports.front().protocol;
  });
  if (joint) {
    text << "# Averaged continual metrics (" << eval::protocol_name(reports.front().protocol)
         << ")\n\n";
    text << "| snapshot | run | MRR | Hits@1 | Hits@3 | Hits@10 |\n";
    text << "|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < reports.front().snapshots.size(); ++i) {
      std::array<double, 4> best{};
      best.fill(-1.0);
      for (const auto& rep : reports) {
        const auto v = metric_values(rep.snapshots[i].average);
        for (std::size_t c = 0; c < 4; ++c) best[c] = std::max(best[c], v[c]);
      }
      for (std::size_t r = 0; r < reports.size(); ++r) {
        const auto v = metric_values(reports[r].snapshots[i].average);
        text << "| " << reports[r].snapshots[i].model_snapshot << " | " << names[r] << " |";
        for (std::size_t c = 0; c < 4; ++c) {
          text << ' ' << fmt(v[c]) << (reports.size() > 1 && v[c] == best[c] ? "*" : "") << " |";
        }
        text << '\n';
      }
    }
  } else {
    for (std::size_t r = 0; r < reports.size(); ++r) {
      text << "# " << names[r] << " (" << eval::protocol_name(reports[r].protocol) << ")\n\n";
      text << "| snapshot | MRR | Hits@1 | Hits@3 | Hits@10 |\n|---|---|---|---|---|\n";
      for (const auto& s : reports[r].snapshots) {
        const auto v = metric_values(s.average);
        text << "| " << s.model_snapshot << " | " << fmt(v[0]) << " | " << fmt(v[1]) << " | "
             << fmt(v[2]) << " | " << fmt(v[3]) << " |\n";
      }
      text << '\n';
    }
  }

  text << "\n# MRR per test snapshot (rows: model snapshot)\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    text << "\n## " << names[r] << "\n\n";
    for (const auto& s : reports[r].snapshots) {
      text << s.model_snapshot << ':';
      for (const auto& m : s.per_test) text << ' ' << fmt(m.mrr);
      text << '\n';
    }
  }
  out.text = text.str();
  return out;
}

}  // namespace ckge::exp
