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

// Point-in-time feature extraction. Every value is computed from events
// dated at or before the snapshot instant.

#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tlp/corpus.hpp"
#include "tlp/proximity.hpp"
#include "tlp/registry.hpp"
#include "tlp/text.hpp"

namespace tlp {

struct Missing {
  bool operator==(const Missing&) const = default;
};

/// MISSING, a number, or a category string.
using FeatureValue = std::variant<Missing, double, std::string>;

inline bool is_missing(const FeatureValue& v) { return std::holds_alternative<Missing>(v); }
/// Serialized form: "" for MISSING, shortest round-trip text for numbers.
std::string to_cell(const FeatureValue& v);

struct RepoMetrics {
  Timestamp at{};
  double total_locs = 0;
  double number_of_files = 0;
  double number_of_languages = 0;
  double smells_count = 0;
};

/// Repository metrics over time, as produced by an external static-analysis
/// job. CSV columns: timestamp,total_LOCs,number_of_files,
/// number_of_languages,smells_count.
class RepoMetricsTimeline {
 public:
  RepoMetricsTimeline() = default;
  /// Throws DataError unless timestamps strictly increase.
  explicit RepoMetricsTimeline(std::vector<RepoMetrics> records);

  static RepoMetricsTimeline load(const std::filesystem::path& path);
  static RepoMetricsTimeline read(std::istream& in);
  void write(std::ostream& out) const;

  /// Latest record at or before t.
  std::optional<RepoMetrics> lookup(Timestamp t) const;
  const std::vector<RepoMetrics>& records() const { return records_; }

 private:
  std::vector<RepoMetrics> records_;
};

struct ExtractionConfig {
  int temporal_window_days = 90;
};

/// Immutable, thread-shareable view of everything the extractor may
/// consult: the labeled ticket population, all commits (including those
/// of other tickets), the repository timeline and the text resources.
class ExtractionContext {
 public:
  ExtractionContext(std::vector<LinkedTicket> population, std::vector<RawCommit> all_commits,
                    RepoMetricsTimeline timeline, const FeatureRegistry& registry = default_registry(),
                    text::LexiconSet lexicons = text::LexiconSet::defaults(), ExtractionConfig config = {});
  ~ExtractionContext();
  ExtractionContext(const ExtractionContext&) = delete;
  ExtractionContext& operator=(const ExtractionContext&) = delete;

  const FeatureRegistry& registry() const { return registry_; }
  const std::vector<LinkedTicket>& population() const { return population_; }
  const ExtractionConfig& config() const { return config_; }

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  FeatureRegistry registry_;
  std::vector<LinkedTicket> population_;
  ExtractionConfig config_;
  std::unique_ptr<Impl> impl_;
};

struct FeatureVector {
  std::string ticket_id;
  ProximityPoint point = ProximityPoint::Open;
  Timestamp instant{};
  bool label = false;
  std::vector<FeatureValue> values;  // registry order
};

/// Throws InvalidArgument when the snapshot at `point` is undefined.
FeatureVector extract_features(const LinkedTicket& ticket, ProximityPoint point, const ExtractionContext& context);

// Individual feature kernels, exposed for testing. `history` holds the
// labeled tickets eligible at t (Closed instant strictly before t).

/// Bug-inducing share of the developer's past assignments; 0 without any.
double compute_anfic(std::string_view developer, std::span<const LinkedTicket> history);
/// Tickets closed in (t - window, t]; weighted variant uses w = 1 - age/window.
double compute_temporal_locality(std::span<const LinkedTicket> history, Timestamp t, int window_days, bool weighted);
double components_max_bugginess(const RawTicket& ticket, std::span<const LinkedTicket> history);

struct JitAggregate {
  double ndev_max, arexp_min, aexp_min, asexp_min, ns_max, age_min, author_date_duration, la_sum, ld_sum,
      fix_count, nd_max, nuc_max, ent_max, nf_max, num_commits;
};
/// Throws InvalidArgument for an empty commit list.
JitAggregate aggregate_jit(std::span<const RawCommit> commits);

/// Per-point feature table with registry columns.
struct FeatureMatrix {
  ProximityPoint point = ProximityPoint::Open;
  std::vector<std::string> columns;  // registry code-names
  std::vector<FeatureVector> rows;   // ordered by snapshot instant, ties by id
  std::vector<ProximityExclusion> excluded;
};

/// Orders the population by proximity and extracts every row, in parallel
/// over `threads` workers (0 = hardware concurrency).
FeatureMatrix build_feature_matrix(const ExtractionContext& context, ProximityPoint point, unsigned threads = 0);

/// Header: ticket_id, proximity, label, then the registry code-names.
void write_feature_matrix(std::ostream& out, const FeatureMatrix& matrix);
FeatureMatrix read_feature_matrix(const std::filesystem::path& path, const FeatureRegistry& registry = default_registry());

}  // namespace tlp
