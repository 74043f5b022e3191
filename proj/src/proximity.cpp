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

#include "tlp/proximity.hpp"

#include <algorithm>
#include <numeric>

#include "tlp/csv.hpp"

namespace tlp {

std::string_view to_string(ProximityPoint point) {
  switch (point) {
    case ProximityPoint::Open: return "open";
    case ProximityPoint::InProgress: return "in_progress";
    case ProximityPoint::Closed: return "closed";
  }
  return "?";
}

ProximityPoint parse_point(std::string_view name) {
  if (name == "open" || name == "Open") return ProximityPoint::Open;
  if (name == "in_progress" || name == "InProgress" || name == "inprogress") return ProximityPoint::InProgress;
  if (name == "closed" || name == "Closed") return ProximityPoint::Closed;
  throw InvalidArgument("unknown proximity point '" + std::string(name) + "'");
}

ProximitySnapshot snapshot_instant(const LinkedTicket& ticket, ProximityPoint point) {
  ProximitySnapshot snap;
  snap.ticket_id = ticket.id();
  snap.point = point;
  if (ticket.commits.empty()) return snap;
  switch (point) {
    case ProximityPoint::Open:
      if (ticket.ticket.assigned_at) {
        snap.instant = *ticket.ticket.assigned_at - Seconds{1};
        snap.defined = true;
      }
      break;
    case ProximityPoint::InProgress:
      snap.instant = ticket.commits.front().authored_at - Seconds{1};
      snap.defined = true;
      break;
    case ProximityPoint::Closed:
      snap.instant = ticket.commits.back().authored_at + Seconds{1};
      snap.defined = true;
      break;
  }
  return snap;
}

bool is_available(Stage stage, ProximityPoint point) {
  switch (stage) {
    case Stage::Open: return true;
    case Stage::Assigned: return point != ProximityPoint::Open;
    case Stage::Closed: return point == ProximityPoint::Closed;
  }
  return false;
}

bool is_available(const FeatureRegistry& registry, std::string_view feature_id, ProximityPoint point) {
  return is_available(registry.at(feature_id).availability, point);
}

bool is_available(std::string_view feature_id, ProximityPoint point) {
  return is_available(default_registry(), feature_id, point);
}

OrderedDataset order_by_proximity(std::span<const LinkedTicket> corpus, ProximityPoint point) {
  OrderedDataset out;
  out.point = point;
  std::vector<ProximitySnapshot> snaps;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto snap = snapshot_instant(corpus[i], point);
    if (!snap.defined) {
      out.excluded.push_back({corpus[i].id(), point,
                              corpus[i].commits.empty() ? "no linked commits" : "no assignment date"});
      continue;
    }
    keep.push_back(i);
    snaps.push_back(std::move(snap));
  }
  std::vector<std::size_t> order(keep.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (snaps[a].instant != snaps[b].instant) return snaps[a].instant < snaps[b].instant;
    return snaps[a].ticket_id < snaps[b].ticket_id;
  });
  out.tickets.reserve(order.size());
  out.snapshots.reserve(order.size());
  for (const auto k : order) {
    out.tickets.push_back(corpus[keep[k]]);
    out.snapshots.push_back(snaps[k]);
  }
  return out;
}

void write_exclusions_csv(std::ostream& out, std::span<const ProximityExclusion> exclusions) {
  csv::write_row(out, {"ticket_id", "point", "reason"});
  for (const auto& e : exclusions) csv::write_row(out, {e.ticket_id, std::string(to_string(e.point)), e.reason});
}

}  // namespace tlp
