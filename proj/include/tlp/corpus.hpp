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

// Ticket/commit ingestion: parsing, commit linkage, bug-inducing labels and
// the anomaly filters applied before any dataset is built.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlp/common.hpp"

namespace tlp {

inline constexpr int kTicketSchemaVersion = 1;

struct Comment {
  std::string author;
  Timestamp at;
  std::string text;
};

struct HistoryEntry {
  std::string author;
  Timestamp at;
};

struct WorkItem {
  std::string author;
  Timestamp at;
  std::int64_t seconds_spent = 0;
};

struct RawTicket {
  std::string id;
  std::string project;
  std::string type;
  std::string priority;
  std::vector<std::string> components;
  Timestamp created_at{};
  std::optional<Timestamp> assigned_at;
  std::string reporter;
  std::string assignee;
  std::string creator;
  std::string title;
  std::string description;
  std::vector<Comment> comments;
  std::vector<HistoryEntry> histories;
  std::vector<WorkItem> work_items;
};

/// Per-commit change metrics as supplied by the upstream JIT dataset.
struct JitMetrics {
  double ns = 0;
  double nd = 0;
  double nf = 0;
  double entropy = 0;
  double la = 0;
  double ld = 0;
  double ndev = 0;
  double age = 0;
  double nuc = 0;
  double aexp = 0;
  double arexp = 0;
  double asexp = 0;
  bool fix = false;
};

struct RawCommit {
  std::string hash;
  std::string author;
  Timestamp authored_at{};
  std::vector<std::string> ticket_ids;
  bool buggy = false;
  JitMetrics jit;
  std::vector<std::string> files;

  double churn() const { return jit.la + jit.ld; }
};

struct LinkedTicket {
  RawTicket ticket;
  /// Sorted by authored_at, ties by hash.
  std::vector<RawCommit> commits;
  bool label = false;

  const std::string& id() const { return ticket.id; }
};

struct Rejection {
  std::string source;  // "tickets" or "commits"
  std::size_t line_no = 0;
  std::string reason;
};

struct LoadedCorpus {
  std::vector<RawTicket> tickets;
  std::vector<RawCommit> commits;
  std::vector<Rejection> rejections;
};

/// Parses the tickets JSON-lines file and the commits CSV file. Malformed
/// records end up in `rejections`; unreadable files, a schema-version
/// mismatch or a duplicate ticket id throw DataError.
LoadedCorpus load_corpus(const std::filesystem::path& tickets_path, const std::filesystem::path& commits_path);

/// Single-record parsers; throw DataError carrying the rejection reason.
RawTicket parse_ticket_json(std::string_view line);
std::string ticket_to_json(const RawTicket& ticket);

inline constexpr std::string_view kCommitColumns[] = {
    "hash", "author", "authored_at", "ticket_ids", "buggy", "ns",   "nd",    "nf",    "entropy",
    "la",   "ld",     "ndev",        "age",        "nuc",   "aexp", "arexp", "asexp", "fix"};

void write_commits_csv(std::ostream& out, std::span<const RawCommit> commits);
void write_tickets_jsonl(std::ostream& out, std::span<const RawTicket> tickets);
void write_rejections_jsonl(std::ostream& out, std::span<const Rejection> rejections);

struct LinkResult {
  std::vector<LinkedTicket> linked;
  std::vector<std::string> tickets_without_commits;
  std::size_t unlinked_commits = 0;  // commits naming no known ticket
};

/// Joins tickets to the commits naming them. Tickets without commits are
/// dropped (reported), commits naming several tickets appear under each.
LinkResult link_commits(std::span<const RawTicket> tickets, std::span<const RawCommit> commits);

/// label = OR of commit.buggy.
std::vector<LinkedTicket> label_tickets(std::vector<LinkedTicket> linked);
bool is_bug_inducing(std::span<const RawCommit> commits);

enum class Filter {
  ExclusiveBuggyCommitsOnly,
  FirstCommitAfterOpeningDate,
  ClearRepository,
  NoSnoring,
  CommitAfterOpeningDate,
};

std::string_view to_string(Filter filter);
Filter parse_filter(std::string_view name);

/// The five anomaly filters in their declared order.
std::vector<Filter> default_filters();

struct FilterConfig {
  /// Project -> whether its main repository could be established. Projects
  /// not listed are treated as unclear (removed with an error entry).
  std::map<std::string, bool> clear_repository;
  /// When true FirstCommitAfterOpeningDate removes tickets whose first
  /// commit is *after* created_at; by default both opening-date filters
  /// remove tickets whose first commit predates created_at.
  bool opening_date_literal_polarity = false;
  double snoring_fraction = 0.2;
};

struct FilterRemoval {
  Filter filter;
  std::string ticket_id;
  std::string reason;
};

struct FilterAudit {
  std::size_t input_size = 0;
  std::size_t survivors = 0;
  std::vector<FilterRemoval> removals;
  /// Tickets removed because a field the filter needs was absent.
  std::vector<FilterRemoval> errors;

  std::size_t removed_by(Filter filter) const;
};

struct FilterOutcome {
  std::vector<LinkedTicket> survivors;
  FilterAudit audit;
};

/// Applies the requested filters in the canonical order regardless of the
/// order given. Each removed ticket is recorded once, under the first filter
/// that removed it.
FilterOutcome apply_filters(std::vector<LinkedTicket> linked, std::span<const Filter> filters,
                            const FilterConfig& config);

std::string audit_to_json(const FilterAudit& audit);

/// Serialized form of an ingested corpus: one ticket JSON object per line
/// extended with "label" and "commit_hashes".
void write_linked_jsonl(std::ostream& out, std::span<const LinkedTicket> linked);
std::vector<LinkedTicket> load_linked(const std::filesystem::path& linked_path, std::span<const RawCommit> commits);

}  // namespace tlp
