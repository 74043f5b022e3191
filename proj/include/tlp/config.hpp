// Copyright 2026 The tlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration: a single JSON document, every field optional and
// defaulted. Command-line flags are applied on top of it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlp/corpus.hpp"
#include "tlp/eval.hpp"
#include "tlp/registry.hpp"

namespace tlp {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "TLP_CONFIG";

struct RunConfig {
  // Inputs. Relative paths are taken as given (relative to the cwd).
  std::filesystem::path tickets = "tickets.jsonl";
  std::filesystem::path commits = "commits.csv";
  std::filesystem::path repo_metrics = "repo_metrics.csv";
  std::filesystem::path lexicons;  // empty = bundled lexicons
  std::filesystem::path out_dir = "out";
  std::string project;  // empty = every project in the corpus

  // Ingest.
  std::vector<Filter> filters = default_filters();
  std::map<std::string, bool> clear_repository;
  /// Read repository clarity from a generator manifest when set.
  std::filesystem::path manifest;
  bool opening_date_literal_polarity = false;
  double snoring_fraction = 0.2;

  // Features.
  std::vector<ProximityPoint> points = {ProximityPoint::Open, ProximityPoint::InProgress, ProximityPoint::Closed};
  int temporal_window_days = 90;
  std::map<std::string, Stage> availability_overrides;

  // Evaluation.
  std::vector<LearnerKind> classifiers = {LearnerKind::RF, LearnerKind::LR, LearnerKind::NN};
  std::vector<Balancing> balancing = {Balancing::None, Balancing::Smote};
  std::vector<Selection> selection = {Selection::None, Selection::Filter};
  WindowParams windows;
  std::uint64_t seed = 1;
  int smote_k = 5;
  int baseline_trials = 1000;
  int forest_trees = 100;
  int nn_hidden = 100;
  int nn_epochs = 200;

  // Power.
  int igr_bins = 10;

  unsigned threads = 0;  // 0 = hardware concurrency

  bool operator==(const RunConfig&) const = default;
};

/// Throws DataError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(std::string_view text);
std::string config_to_json(const RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);
/// The file named by TLP_CONFIG, or defaults when the variable is unset.
RunConfig default_config();

/// Throws DataError when a value is out of range.
void validate(const RunConfig& config);

/// Registry with the configured availability overrides applied.
FeatureRegistry make_registry(const RunConfig& config);
FilterConfig make_filter_config(const RunConfig& config);
GridOptions make_grid_options(const RunConfig& config);

}  // namespace tlp
