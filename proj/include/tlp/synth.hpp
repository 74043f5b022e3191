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

// Deterministic synthetic corpora with known, stage-dependent signal.
//
// Labels follow a logistic model over three independent latent scores:
//   logit = b0 + open * z_open + type_effect + in_progress * z_ip + closed * z_churn
// z_open surfaces as the ticket priority, z_ip as the amount of ticket
// activity between assignment and the first commit, and z_churn as the
// lines added by the ticket's commits. Everything else is noise.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tlp/corpus.hpp"
#include "tlp/features.hpp"

namespace tlp {

struct SignalStrengths {
  double open = 3.0;
  double in_progress = 2.0;
  double closed = 4.0;
};

struct GeneratorSpec {
  std::size_t tickets = 2000;
  double prevalence = 0.45;
  std::uint64_t seed = 7;
  SignalStrengths signals;
  int span_days = 730;
  std::string project = "SYN";
  std::string start = "2018-01-01T00:00:00Z";
  double unassigned_fraction = 0.05;
  std::size_t developers = 25;
  std::size_t components = 8;
  /// Plant one ticket per data-driven anomaly filter (see manifest).
  bool plant_filter_cases = true;
};

struct GeneratedCorpus {
  GeneratorSpec spec;
  std::vector<RawTicket> tickets;
  std::vector<RawCommit> commits;
  RepoMetricsTimeline timeline;
  double intercept = 0;
  std::map<std::string, double> type_effects;
  /// Filter name -> ticket ids planted to trigger it.
  std::map<std::string, std::vector<std::string>> planted;
  /// Project -> repository clarity, to be used as FilterConfig input.
  std::map<std::string, bool> clear_repository;
};

/// Throws InvalidArgument for an invalid spec.
GeneratedCorpus generate(const GeneratorSpec& spec);

/// JSON manifest: spec, coefficients, planted items, repository clarity.
std::string manifest_json(const GeneratedCorpus& corpus);

/// Writes tickets.jsonl, commits.csv, repo_metrics.csv and manifest.json.
void write_generated(const GeneratedCorpus& corpus, const std::filesystem::path& dir);

/// Reads the repository-clarity map back from a manifest.json.
std::map<std::string, bool> read_manifest_clarity(const std::filesystem::path& manifest_path);

}  // namespace tlp
