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

// Human-readable summary plus plot-ready CSVs. Every output is written in a
// fixed order and carries no wall-clock data, so identical inputs give
// byte-identical files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tlp/eval.hpp"
#include "tlp/power.hpp"

namespace tlp {

struct ReportFile {
  std::string name;  // relative to the report directory
  std::uintmax_t bytes = 0;
  std::uint64_t fnv1a = 0;
};

/// Files written by emit_report, in manifest order. Power files are only
/// written when power records are given.
std::vector<std::string> report_file_names(bool with_power);

/// Writes into out_dir:
///   summary.md                 the tables below in markdown
///   gains.csv                  setup x metric rows, one gain column per point
///   friedman.csv               proximity-point Friedman test per setup x metric
///   accuracy_distribution.csv  one row per evaluated (point, classifier, setup, window)
///   top10.csv, bottom10.csv    mean-IGR rankings per point        (power)
///   igr_distribution.csv       family mean IGR per window and point (power)
///   power_tests.csv            two-way family x point analysis    (power)
///   manifest.json              name, size and FNV-1a of every file above
/// Throws InvalidArgument for empty results, DataError when the directory
/// cannot be written.
std::vector<ReportFile> emit_report(const GridResult& results, std::span<const IgrRecord> power,
                                    const std::filesystem::path& out_dir);

/// Hex FNV-1a of a file's bytes.
std::uint64_t file_fnv1a(const std::filesystem::path& path);

}  // namespace tlp
