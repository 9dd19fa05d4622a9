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

#include "ckge/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ckge/error.hpp"
#include "ckge/hash.hpp"

namespace ckge {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<std::size_t> to_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_u64(key, trim(item)));
  return out;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

kg::SyntheticSpec& synthetic_of(RunConfig& c) {
  if (!c.synthetic) c.synthetic.emplace();
  return *c.synthetic;
}

}  // namespace

std::vector<Setting> parse_settings(const std::string& text) {
  std::vector<Setting> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

std::vector<Setting> read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str());
}

void apply_setting(Hyperparameters& hp, const std::string& key, const std::string& value) {
  if (key == "dim") hp.dim = to_u64(key, value);
  else if (key == "margin") hp.margin = to_double(key, value);
  else if (key == "lambda_obs") hp.lambda_obs = to_double(key, value);
  else if (key == "lambda_obs_relation") {
    if (value.empty() || value == "none") hp.lambda_obs_relation.reset();
    else hp.lambda_obs_relation = to_double(key, value);
  }
  else if (key == "lambda_init") hp.lambda_init = to_double(key, value);
  else if (key == "beta") hp.beta = to_double(key, value);
  else if (key == "tau") hp.tau = to_double(key, value);
  else if (key == "clusters") hp.clusters = to_u64(key, value);
  else if (key == "eta") hp.eta = to_double(key, value);
  else if (key == "alpha_mode") hp.alpha_mode = parse_alpha_mode(value);
  else if (key == "learning_rate") hp.learning_rate = to_double(key, value);
  else if (key == "epochs") hp.epochs = to_u64(key, value);
  else if (key == "batch_size") hp.batch_size = to_u64(key, value);
  else if (key == "negatives") hp.negatives = to_u64(key, value);
  else if (key == "reassign_every") hp.reassign_every = to_u64(key, value);
  else if (key == "normalize_entities") hp.normalize_entities = to_bool(key, value);
  else if (key == "exact_betweenness_limit") hp.exact_betweenness_limit = to_u64(key, value);
  else if (key == "betweenness_pivots") hp.betweenness_pivots = to_u64(key, value);
  else if (key == "seed") hp.seed = to_u64(key, value);
  else throw ConfigError("unknown hyperparameter '" + key + "'");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "data") c.data_root = value;
  else if (key == "output") c.output_dir = value;
  else if (key == "disable_bayes") c.disable_bayes = to_bool(key, value);
  else if (key == "disable_fcc") c.disable_fcc = to_bool(key, value);
  else if (key == "freeze_old_centroids") c.freeze_old_centroids = to_bool(key, value);
  else if (key == "protocol") c.protocol = eval::parse_protocol(value);
  else if (key == "synthetic.regime") synthetic_of(c).regime = kg::parse_regime(value);
  else if (key == "synthetic.snapshots") synthetic_of(c).snapshots = to_u64(key, value);
  else if (key == "synthetic.entities") synthetic_of(c).final_entities = to_u64(key, value);
  else if (key == "synthetic.entity_counts") synthetic_of(c).entities = to_list(key, value);
  else if (key == "synthetic.triples") synthetic_of(c).triples = to_list(key, value);
  else if (key == "synthetic.base_triples") synthetic_of(c).base_triples = to_u64(key, value);
  else if (key == "synthetic.relations") synthetic_of(c).relations = to_u64(key, value);
  else if (key == "synthetic.latent_dim") synthetic_of(c).latent_dim = to_u64(key, value);
  else if (key == "synthetic.tail_choices") synthetic_of(c).tail_choices = to_u64(key, value);
  else if (key == "synthetic.seed") {
    synthetic_of(c).seed = to_u64(key, value);
    c.synthetic_seed_explicit = true;
  } else apply_setting(c.hp, key, value);
}

void RunConfig::validate() const {
  if (data_root.has_value() == synthetic.has_value()) {
    throw ConfigError("set exactly one of 'data' or the synthetic.* keys");
  }
  hp.validate();
}

std::vector<Setting> to_settings(const Hyperparameters& hp) {
  return {
      {"dim", std::to_string(hp.dim)},
      {"margin", format_double(hp.margin)},
      {"lambda_obs", format_double(hp.lambda_obs)},
      {"lambda_obs_relation", hp.lambda_obs_relation ? format_double(*hp.lambda_obs_relation) : "none"},
      {"lambda_init", format_double(hp.lambda_init)},
      {"beta", format_double(hp.beta)},
      {"tau", format_double(hp.tau)},
      {"clusters", std::to_string(hp.clusters)},
      {"eta", format_double(hp.eta)},
      {"alpha_mode", alpha_mode_name(hp.alpha_mode)},
      {"learning_rate", format_double(hp.learning_rate)},
      {"epochs", std::to_string(hp.epochs)},
      {"batch_size", std::to_string(hp.batch_size)},
      {"negatives", std::to_string(hp.negatives)},
      {"reassign_every", std::to_string(hp.reassign_every)},
      {"normalize_entities", bool_text(hp.normalize_entities)},
      {"exact_betweenness_limit", std::to_string(hp.exact_betweenness_limit)},
      {"betweenness_pivots", std::to_string(hp.betweenness_pivots)},
      {"seed", std::to_string(hp.seed)},
  };
}

std::vector<Setting> to_settings(const RunConfig& c) {
  std::vector<Setting> out;
  if (c.data_root) out.emplace_back("data", c.data_root->string());
  if (c.synthetic) {
    const auto& s = *c.synthetic;
    out.emplace_back("synthetic.regime", kg::regime_name(s.regime));
    out.emplace_back("synthetic.snapshots", std::to_string(s.snapshots));
    out.emplace_back("synthetic.entities", std::to_string(s.final_entities));
    if (!s.entities.empty()) out.emplace_back("synthetic.entity_counts", join(s.entities));
    if (!s.triples.empty()) out.emplace_back("synthetic.triples", join(s.triples));
    out.emplace_back("synthetic.base_triples", std::to_string(s.base_triples));
    out.emplace_back("synthetic.relations", std::to_string(s.relations));
    out.emplace_back("synthetic.latent_dim", std::to_string(s.latent_dim));
    out.emplace_back("synthetic.tail_choices", std::to_string(s.tail_choices));
    if (c.synthetic_seed_explicit) out.emplace_back("synthetic.seed", std::to_string(s.seed));
  }
  for (auto& kv : to_settings(c.hp)) out.push_back(std::move(kv));
  out.emplace_back("disable_bayes", bool_text(c.disable_bayes));
  out.emplace_back("disable_fcc", bool_text(c.disable_fcc));
  out.emplace_back("freeze_old_centroids", bool_text(c.freeze_old_centroids));
  out.emplace_back("protocol", eval::protocol_name(c.protocol));
  out.emplace_back("output", c.output_dir.string());
  return out;
}

std::string format_settings(const std::vector<Setting>& settings) {
  std::string out;
  for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
  return out;
}

}  // namespace ckge
