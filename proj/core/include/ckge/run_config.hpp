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

#ifndef CKGE_RUN_CONFIG_HPP_
#define CKGE_RUN_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckge/evaluation.hpp"
#include "ckge/hyperparameters.hpp"
#include "ckge/synthetic.hpp"

namespace ckge {

using Setting = std::pair<std::string, std::string>;

// One grid cell: data source, hyperparameters and ablation switches.
struct RunConfig {
  std::optional<std::filesystem::path> data_root;
  std::optional<kg::SyntheticSpec> synthetic;
  bool synthetic_seed_explicit = false;
  Hyperparameters hp;
  bool disable_bayes = false;
  bool disable_fcc = false;
  bool freeze_old_centroids = false;
  eval::Protocol protocol = eval::Protocol::kFiltered;
  std::filesystem::path output_dir = "run";

  // Throws ConfigError unless exactly one data source is set and all
  // hyperparameters are valid.
  void validate() const;
};

// Flat `key = value` lines; '#' starts a comment.
std::vector<Setting> parse_settings(const std::string& text);
std::vector<Setting> read_settings_file(const std::filesystem::path& path);

// Applies one setting. Unknown keys and malformed values throw ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
void apply_setting(Hyperparameters& hp, const std::string& key, const std::string& value);

// Canonical key/value listing (round-trips through apply_setting).
std::vector<Setting> to_settings(const RunConfig& config);
std::vector<Setting> to_settings(const Hyperparameters& hp);

std::string format_settings(const std::vector<Setting>& settings);

}  // namespace ckge

#endif  // CKGE_RUN_CONFIG_HPP_
