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

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tlp {

enum class Family { Code, Developer, ExternalTemperature, InternalTemperature, Intrinsic, TicketToTickets, Jit };

/// Earliest lifecycle stage at which a feature can be measured.
enum class Stage { Open, Assigned, Closed };

enum class ValueKind { Numeric, Categorical };

/// Short family tags as used in reports: C, D, E_T, I_T, I, T2T, JIT.
std::string_view family_tag(Family family);
Family parse_family(std::string_view tag);
std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);

inline constexpr Family kAllFamilies[] = {Family::Code,      Family::Developer,       Family::ExternalTemperature,
                                          Family::InternalTemperature, Family::Intrinsic, Family::TicketToTickets,
                                          Family::Jit};

struct FeatureInfo {
  std::string code_name;
  Family family;
  Stage availability;
  ValueKind kind = ValueKind::Numeric;
};

class UnknownFeature : public std::out_of_range {
 public:
  explicit UnknownFeature(std::string_view name)
      : std::out_of_range("unknown feature '" + std::string(name) + "'") {}
};

class FeatureRegistry {
 public:
  explicit FeatureRegistry(std::vector<FeatureInfo> entries);

  const std::vector<FeatureInfo>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const FeatureInfo& operator[](std::size_t i) const { return entries_[i]; }

  std::optional<std::size_t> find(std::string_view code_name) const;
  /// Throws UnknownFeature.
  std::size_t index_of(std::string_view code_name) const;
  const FeatureInfo& at(std::string_view code_name) const { return entries_[index_of(code_name)]; }

  std::size_t count(Family family) const;
  std::vector<std::string> names_in(Family family) const;

  /// Copy with the availability of some entries replaced.
  FeatureRegistry with_availability(const std::map<std::string, Stage>& overrides) const;

 private:
  std::vector<FeatureInfo> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// The 71 ticket-level features (C:4, D:2, E_T:6, I_T:10, I:22, T2T:12,
/// JIT:15). The literature figure of 72 is not reachable from the
/// enumerated tables; 71 is what they list.
const FeatureRegistry& default_registry();

namespace feature {
// Names referenced directly by the extractor.
inline constexpr std::string_view kSmells = "code_quality-smells_count";
inline constexpr std::string_view kLanguages = "code_size-number_of_languages";
inline constexpr std::string_view kFiles = "code_size-number_of_files";
inline constexpr std::string_view kLocs = "code_size-total_LOCs";
inline constexpr std::string_view kAnfic = "assignee-ANFIC";
inline constexpr std::string_view kFamiliarity = "assignee-familiarity";
inline constexpr std::string_view kTemporalLocality = "temporal_locality";
inline constexpr std::string_view kTemporalLocalityWeighted = "temporal_locality-weighted";
inline constexpr std::string_view kWipCount = "commits_while_in_progress-count";
inline constexpr std::string_view kWipChurn = "commits_while_in_progress-churn";
inline constexpr std::string_view kLatestChurn = "latest_commit-churn";
inline constexpr std::string_view kLatestFiles = "latest_commit-number_of_files";
inline constexpr std::string_view kParticipants = "issue_participants-count";
inline constexpr std::string_view kActivities = "activities-count";
inline constexpr std::string_view kComments = "activities-comments_count";
inline constexpr std::string_view kWorkItems = "activities-work_items_count";
inline constexpr std::string_view kHistories = "activities-histories_count";
inline constexpr std::string_view kPolarity = "nlp4re_sentiment-IT_POL";
inline constexpr std::string_view kSubjectivity = "nlp4re_sentiment-IT_SUB";
inline constexpr std::string_view kNegCount = "nlp4re_sentiment-CM_NNS";
inline constexpr std::string_view kNegShare = "nlp4re_sentiment-CM_PNS";
inline constexpr std::string_view kNegPresent = "nlp4re_sentiment-CM_ONS";
inline constexpr std::string_view kPriority = "priority";
inline constexpr std::string_view kComponentsCount = "components-count";
inline constexpr std::string_view kComponentsBugginess = "components-max_bugginess";
inline constexpr std::string_view kType = "type";
inline constexpr std::string_view kJitLaSum = "jit-la-SUM";
inline constexpr std::string_view kNumCommits = "num_commits";
}  // namespace feature

}  // namespace tlp
