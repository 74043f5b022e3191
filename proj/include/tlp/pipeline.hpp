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

// File-to-file pipeline stages. Each stage reads what the previous one
// wrote under RunConfig::out_dir:
//
//   ingest/     linked.jsonl, filter_audit.json, rejections.jsonl, link.json
//   features/   <point>.csv, <point>_excluded.csv
//   evaluate/   results.csv, gains.csv, cell_errors.csv, windows.csv
//   power/      igr.csv, family.csv, ranking_<point>.csv
//   report/     see emit_report

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlp/config.hpp"
#include "tlp/report.hpp"

namespace tlp {

struct StageSummary {
  std::vector<std::filesystem::path> written;
  std::string message;  // one-line human summary
};

std::filesystem::path features_path(const RunConfig& config, ProximityPoint point);

/// Load, link, label and filter the corpus. Without an explicit manifest, a
/// manifest.json next to the tickets file supplies repository clarity.
/// Throws DataError for unreadable or inconsistent inputs.
StageSummary run_ingest(const RunConfig& config);
/// Per-point feature matrices from the ingested corpus.
StageSummary run_featurize(const RunConfig& config);
StageSummary run_evaluate(const RunConfig& config);
StageSummary run_power(const RunConfig& config);
/// Power outputs are optional; evaluation results are required.
StageSummary run_report(const RunConfig& config);

}  // namespace tlp
