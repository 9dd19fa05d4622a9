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

// ckge: train, evaluate, generate and compare continual KG embedding runs.
//
// Exit codes: 0 success, 2 configuration error, 3 data error,
// 4 numeric abort, 1 anything else.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ckge/error.hpp"
#include "ckge/experiment.hpp"
#include "ckge/hash.hpp"
#include "ckge/run_config.hpp"
#include "ckge/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ckge::DataError("cannot write " + path.string());
  out << text;
}

void print_report(const ckge::eval::MetricsReport& report) {
  std::cout << "protocol " << ckge::eval::protocol_name(report.protocol) << '\n';
  for (const auto& s : report.snapshots) {
    std::cout << "snapshot " << s.model_snapshot << "  MRR " << ckge::format_double(s.average.mrr)
              << "  H@1 " << ckge::format_double(s.average.hits1) << "  H@3 "
              << ckge::format_double(s.average.hits3) << "  H@10 "
              << ckge::format_double(s.average.hits10) << '\n';
  }
}

struct TrainArgs {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string data;
  std::string synthetic;
  std::string out;
  std::string protocol;
  bool disable_bayes = false;
  bool disable_fcc = false;
  bool freeze_old = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> epochs;
  std::size_t seeds = 1;
};

int cmd_train(const TrainArgs& a) {
  ckge::RunConfig config;
  if (!a.config_file.empty()) {
    for (const auto& [k, v] : ckge::read_settings_file(a.config_file)) ckge::apply_setting(config, k, v);
  }
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ckge::ConfigError("--set expects key=value, got '" + kv + "'");
    ckge::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!a.data.empty()) ckge::apply_setting(config, "data", a.data);
  if (!a.synthetic.empty()) ckge::apply_setting(config, "synthetic.regime", a.synthetic);
  if (!a.out.empty()) config.output_dir = a.out;
  if (!a.protocol.empty()) config.protocol = ckge::eval::parse_protocol(a.protocol);
  if (a.disable_bayes) config.disable_bayes = true;
  if (a.disable_fcc) config.disable_fcc = true;
  if (a.freeze_old) config.freeze_old_centroids = true;
  if (a.seed) config.hp.seed = *a.seed;
  if (a.dim) config.hp.dim = *a.dim;
  if (a.epochs) config.hp.epochs = *a.epochs;
  config.validate();

  const auto outcome = a.seeds > 1 ? ckge::exp::run_seed_sweep(config, a.seeds, &std::cerr)
                                   : ckge::exp::run_training(config, &std::cerr);
  print_report(outcome.report);
  std::cout << "run directory " << outcome.run_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual knowledge graph embedding with Bayesian priors and clustering"};
  app.require_subcommand(1);

  TrainArgs targs;
  auto* train = app.add_subcommand("train", "Train over all snapshots and write a run directory");
  train->add_option("--config", targs.config_file, "key=value config file")->check(CLI::ExistingFile);
  train->add_option("--set", targs.overrides, "Override one setting (key=value); repeatable");
  train->add_option("--data", targs.data, "Dataset root with snapshot directories");
  train->add_option("--synthetic", targs.synthetic, "Generate data instead: equal, higher or lower");
  train->add_option("--out", targs.out, "Run directory");
  train->add_option("--protocol", targs.protocol, "filtered or raw");
  train->add_flag("--disable-bayes", targs.disable_bayes, "Plain fine-tuning commit, no prior term");
  train->add_flag("--disable-fcc", targs.disable_fcc, "Drop the contrastive clustering term");
  train->add_flag("--freeze-old-centroids", targs.freeze_old, "Keep inherited centroids fixed");
  train->add_option("--seed", targs.seed, "Run seed");
  train->add_option("--dim", targs.dim, "Embedding dimension");
  train->add_option("--epochs", targs.epochs, "Epochs per snapshot");
  train->add_option("--seeds", targs.seeds, "Number of consecutive seeds to run and average")
      ->check(CLI::PositiveNumber);

  std::string ckpt, eval_data, eval_protocol = "filtered", eval_out;
  auto* evalc = app.add_subcommand("eval", "Recompute continual metrics from a checkpoint");
  evalc->add_option("--checkpoint", ckpt, "Checkpoint file")->required();
  evalc->add_option("--data", eval_data, "Dataset root")->required();
  evalc->add_option("--protocol", eval_protocol, "filtered or raw");
  evalc->add_option("--out", eval_out, "Directory for metrics.json and metrics.csv");

  ckge::kg::SyntheticSpec spec;
  std::string regime = "equal", gen_out;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic snapshot sequence");
  gen->add_option("--regime", regime, "equal, higher or lower");
  gen->add_option("--snapshots", spec.snapshots, "Number of snapshots");
  gen->add_option("--entities", spec.final_entities, "Entities in the last snapshot");
  gen->add_option("--relations", spec.relations, "Relation count");
  gen->add_option("--base-triples", spec.base_triples, "Triples in the first snapshot");
  gen->add_option("--seed", spec.seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output dataset root")->required();

  std::vector<std::string> runs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Compare run directories");
  report->add_option("runs", runs, "Run directories")->required();
  report->add_option("--out", report_out, "Write report.md and forgetting.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train) return cmd_train(targs);
    if (*evalc) {
      const auto rep =
          ckge::exp::run_eval(ckpt, eval_data, ckge::eval::parse_protocol(eval_protocol));
      print_report(rep);
      if (!eval_out.empty()) {
        write_file(fs::path(eval_out) / "metrics.json", ckge::eval::report_to_json(rep));
        write_file(fs::path(eval_out) / "metrics.csv", ckge::eval::report_to_csv(rep));
      }
      return 0;
    }
    if (*gen) {
      spec.regime = ckge::kg::parse_regime(regime);
      const auto seq = ckge::kg::generate_synthetic_sequence(spec);
      ckge::kg::write_snapshot_sequence(seq, gen_out);
      for (std::size_t t = 0; t < seq.size(); ++t) {
        const auto s = seq.stats(t);
        std::cout << "snapshot " << t << ": " << s.entities << " entities, " << s.relations
                  << " relations, " << s.triples << " triples\n";
      }
      return 0;
    }
    if (*report) {
      std::vector<fs::path> dirs(runs.begin(), runs.end());
      const auto cmp = ckge::exp::run_report(dirs);
      std::cout << cmp.text;
      if (!report_out.empty()) {
        write_file(fs::path(report_out) / "report.md", cmp.text);
        write_file(fs::path(report_out) / "forgetting.csv", cmp.csv);
      }
      return 0;
    }
  } catch (const ckge::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ckge::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const ckge::NumericError& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
