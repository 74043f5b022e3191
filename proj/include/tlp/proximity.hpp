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

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlp/corpus.hpp"
#include "tlp/registry.hpp"

namespace tlp {

/// Measurement anchors in a ticket's lifecycle, totally ordered.
enum class ProximityPoint { Open = 0, InProgress = 1, Closed = 2 };

inline constexpr ProximityPoint kAllPoints[] = {ProximityPoint::Open, ProximityPoint::InProgress,
                                                ProximityPoint::Closed};

/// "open", "in_progress", "closed".
std::string_view to_string(ProximityPoint point);
/// Accepts the lower-case names and the capitalized forms (Open, InProgress, Closed).
ProximityPoint parse_point(std::string_view name);

struct ProximitySnapshot {
  std::string ticket_id;
  ProximityPoint point = ProximityPoint::Open;
  Timestamp instant{};
  /// False when the anchoring event is missing (Open without assignment).
  bool defined = false;
};

/// Open = assigned_at - 1s, InProgress = first commit - 1s,
/// Closed = last commit + 1s.
ProximitySnapshot snapshot_instant(const LinkedTicket& ticket, ProximityPoint point);

/// Whether a feature with the given availability stage can be measured at
/// `point`.
bool is_available(Stage stage, ProximityPoint point);
/// Throws UnknownFeature for ids missing from the registry.
bool is_available(const FeatureRegistry& registry, std::string_view feature_id, ProximityPoint point);
bool is_available(std::string_view feature_id, ProximityPoint point);

struct ProximityExclusion {
  std::string ticket_id;
  ProximityPoint point;
  std::string reason;
};

struct OrderedDataset {
  ProximityPoint point = ProximityPoint::Open;
  std::vector<LinkedTicket> tickets;
  std::vector<ProximitySnapshot> snapshots;  // parallel to tickets
  std::vector<ProximityExclusion> excluded;
};

/// Ascending by snapshot instant, ties by ticket id. Tickets whose snapshot
/// is undefined at `point` are excluded and reported.
OrderedDataset order_by_proximity(std::span<const LinkedTicket> corpus, ProximityPoint point);

void write_exclusions_csv(std::ostream& out, std::span<const ProximityExclusion> exclusions);

}  // namespace tlp
