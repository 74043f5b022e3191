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

#include "tlp/registry.hpp"

#include "tlp/common.hpp"

namespace tlp {

std::string_view family_tag(Family family) {
  switch (family) {
    case Family::Code: return "C";
    case Family::Developer: return "D";
    case Family::ExternalTemperature: return "E_T";
    case Family::InternalTemperature: return "I_T";
    case Family::Intrinsic: return "I";
    case Family::TicketToTickets: return "T2T";
    case Family::Jit: return "JIT";
  }
  return "?";
}

Family parse_family(std::string_view tag) {
  for (const auto f : kAllFamilies)
    if (family_tag(f) == tag) return f;
  throw InvalidArgument("unknown feature family '" + std::string(tag) + "'");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Open: return "Open";
    case Stage::Assigned: return "Assigned";
    case Stage::Closed: return "Closed";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (const auto s : {Stage::Open, Stage::Assigned, Stage::Closed})
    if (to_string(s) == name) return s;
  throw InvalidArgument("unknown availability stage '" + std::string(name) + "'");
}

FeatureRegistry::FeatureRegistry(std::vector<FeatureInfo> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (!index_.emplace(entries_[i].code_name, i).second)
      throw InvalidArgument("duplicate feature code-name '" + entries_[i].code_name + "'");
}

std::optional<std::size_t> FeatureRegistry::find(std::string_view code_name) const {
  const auto it = index_.find(std::string(code_name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureRegistry::index_of(std::string_view code_name) const {
  if (const auto i = find(code_name)) return *i;
  throw UnknownFeature(code_name);
}

std::size_t FeatureRegistry::count(Family family) const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.family == family;
  return n;
}

std::vector<std::string> FeatureRegistry::names_in(Family family) const {
  std::vector<std::string> names;
  for (const auto& e : entries_)
    if (e.family == family) names.push_back(e.code_name);
  return names;
}

FeatureRegistry FeatureRegistry::with_availability(const std::map<std::string, Stage>& overrides) const {
  auto copy = entries_;
  for (const auto& [name, stage] : overrides) copy[index_of(name)].availability = stage;
  return FeatureRegistry(std::move(copy));
}

namespace {

std::vector<FeatureInfo> build_entries() {
  using F = Family;
  using S = Stage;
  std::vector<FeatureInfo> e;
  auto add = [&](std::string name, F family, S stage, ValueKind kind = ValueKind::Numeric) {
    e.push_back({std::move(name), family, stage, kind});
  };

  add("code_quality-smells_count", F::Code, S::Open);
  add("code_size-number_of_languages", F::Code, S::Open);
  add("code_size-number_of_files", F::Code, S::Open);
  add("code_size-total_LOCs", F::Code, S::Open);

  add("assignee-ANFIC", F::Developer, S::Assigned);
  add("assignee-familiarity", F::Developer, S::Assigned);

  // temporal_locality{,-weighted} are tagged Assigned so that the whole
  // External Temperature block becomes measurable together with the
  // developer features; override via RunConfig to measure them at Open.
  add("temporal_locality", F::ExternalTemperature, S::Assigned);
  add("temporal_locality-weighted", F::ExternalTemperature, S::Assigned);
  add("commits_while_in_progress-count", F::ExternalTemperature, S::Assigned);
  add("commits_while_in_progress-churn", F::ExternalTemperature, S::Assigned);
  add("latest_commit-churn", F::ExternalTemperature, S::Assigned);
  add("latest_commit-number_of_files", F::ExternalTemperature, S::Assigned);

  add("issue_participants-count", F::InternalTemperature, S::Open);
  add("activities-count", F::InternalTemperature, S::Open);
  add("activities-comments_count", F::InternalTemperature, S::Open);
  add("activities-work_items_count", F::InternalTemperature, S::Open);
  add("activities-histories_count", F::InternalTemperature, S::Open);
  add("nlp4re_sentiment-IT_POL", F::InternalTemperature, S::Open);
  add("nlp4re_sentiment-IT_SUB", F::InternalTemperature, S::Open);
  add("nlp4re_sentiment-CM_NNS", F::InternalTemperature, S::Open);
  add("nlp4re_sentiment-CM_PNS", F::InternalTemperature, S::Open);
  add("nlp4re_sentiment-CM_ONS", F::InternalTemperature, S::Open);

  add("priority", F::Intrinsic, S::Open, ValueKind::Categorical);
  add("components-count", F::Intrinsic, S::Open);
  add("components-max_bugginess", F::Intrinsic, S::Open);
  add("type", F::Intrinsic, S::Open, ValueKind::Categorical);
  for (const char* code : {"DA_ACT", "DA_CND", "DA_CNT", "DA_IMP", "DA_INC", "DA_OPT", "DA_SRC", "DA_WKP", "DA_RKL",
                           "EX_SBJ", "EX_CNS", "EX_VRB", "EX_AMG", "EX_DIR", "EX_RDS", "EX_ICP", "EX_ACD", "EX_ENT"})
    add(std::string("nlp4re_description-") + code, F::Intrinsic, S::Open);

  for (const char* agg : {"max", "avg"})
    for (const char* metric : {"jaccard", "tfidf_cosine", "euclidean_distance"})
      for (const char* field : {"title", "text"})
        add(std::string("buggy_similarity-") + agg + "_similarity_" + metric + "_" + field, F::TicketToTickets, S::Open);

  for (const char* name : {"jit-ndev-MAX", "jit-arexp-MIN", "jit-aexp-MIN", "jit-asexp-MIN", "jit-ns-MAX", "jit-age-MIN",
                           "jit-author_date-DURATION", "jit-la-SUM", "jit-ld-SUM", "jit-fix-COUNT_TRUE", "jit-nd-MAX",
                           "jit-nuc-MAX", "jit-ent-MAX", "jit-nf-MAX", "num_commits"})
    add(name, F::Jit, S::Closed);
  return e;
}

}  // namespace

const FeatureRegistry& default_registry() {
  static const FeatureRegistry registry(build_entries());
  return registry;
}

}  // namespace tlp
