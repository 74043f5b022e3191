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

#include "tlp/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tlp/csv.hpp"

namespace tlp {

using nlohmann::json;

namespace {

std::string string_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

Timestamp time_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw DataError(std::string("missing ") + key);
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a timestamp string");
  return parse_timestamp(it->get<std::string>());
}

const json& array_field(const json& obj, const char* key) {
  static const json empty = json::array();
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return empty;
  if (!it->is_array()) throw DataError(std::string("field '") + key + "' must be an array");
  return *it;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "True" || text == "TRUE" || text == "1") return true;
  if (text == "false" || text == "False" || text == "FALSE" || text == "0") return false;
  throw DataError("not a boolean: '" + std::string(text) + "'");
}

void check_ticket(const RawTicket& t) {
  if (t.id.empty()) throw DataError("missing id");
  auto check = [&](Timestamp at, const char* what) {
    if (at < t.created_at) throw DataError(std::string(what) + " timestamp precedes created_at");
  };
  for (const auto& c : t.comments) check(c.at, "comment");
  for (const auto& h : t.histories) check(h.at, "history");
  for (const auto& w : t.work_items) check(w.at, "work item");
  if (t.assigned_at && *t.assigned_at < t.created_at) throw DataError("assigned_at precedes created_at");
}

RawCommit parse_commit_row(const csv::Row& row, const std::vector<std::size_t>& idx, std::optional<std::size_t> files_idx) {
  auto field = [&](std::size_t k) -> const std::string& {
    if (idx[k] >= row.size()) throw DataError("row has too few fields");
    return row[idx[k]];
  };
  RawCommit c;
  c.hash = field(0);
  if (c.hash.empty()) throw DataError("missing hash");
  c.author = field(1);
  c.authored_at = parse_timestamp(field(2));
  for (auto& id : csv::split(field(3), ';'))
    if (!id.empty()) c.ticket_ids.push_back(std::move(id));
  c.buggy = parse_bool(field(4));
  auto& m = c.jit;
  double* numeric[] = {&m.ns, &m.nd, &m.nf, &m.entropy, &m.la, &m.ld, &m.ndev, &m.age, &m.nuc, &m.aexp, &m.arexp, &m.asexp};
  for (std::size_t k = 0; k < 12; ++k) *numeric[k] = parse_double(field(5 + k));
  m.fix = parse_bool(field(17));
  for (const double v : {m.la, m.ld, m.ns, m.nd, m.nf, m.ndev, m.nuc, m.entropy})
    if (v < 0) throw DataError("negative change metric");
  if (files_idx && *files_idx < row.size())
    for (auto& f : csv::split(row[*files_idx], ';'))
      if (!f.empty()) c.files.push_back(std::move(f));
  return c;
}

bool commit_before(const RawCommit& a, const RawCommit& b) {
  if (a.authored_at != b.authored_at) return a.authored_at < b.authored_at;
  return a.hash < b.hash;
}

}  // namespace

RawTicket parse_ticket_json(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw DataError("ticket record is not a JSON object");
  RawTicket t;
  try {
    t.id = string_field(obj, "id");
    if (t.id.empty()) throw DataError("missing id");
    t.project = string_field(obj, "project");
    t.type = string_field(obj, "type");
    t.priority = string_field(obj, "priority");
    for (const auto& c : array_field(obj, "components")) t.components.push_back(c.get<std::string>());
    t.created_at = time_field(obj, "created_at");
    if (obj.contains("assigned_at") && !obj["assigned_at"].is_null()) t.assigned_at = time_field(obj, "assigned_at");
    t.reporter = string_field(obj, "reporter");
    t.assignee = string_field(obj, "assignee");
    t.creator = string_field(obj, "creator");
    t.title = string_field(obj, "title");
    t.description = string_field(obj, "description");
    for (const auto& c : array_field(obj, "comments"))
      t.comments.push_back({string_field(c, "author"), time_field(c, "at"), string_field(c, "text")});
    for (const auto& h : array_field(obj, "histories"))
      t.histories.push_back({string_field(h, "author"), time_field(h, "at")});
    for (const auto& w : array_field(obj, "work_items"))
      t.work_items.push_back({string_field(w, "author"), time_field(w, "at"), w.value("seconds", std::int64_t{0})});
  } catch (const json::exception& e) {
    throw DataError(std::string("bad field type: ") + e.what());
  }
  check_ticket(t);
  return t;
}

namespace {

json ticket_json(const RawTicket& t) {
  json obj;
  obj["schema_version"] = kTicketSchemaVersion;
  obj["id"] = t.id;
  obj["project"] = t.project;
  obj["type"] = t.type;
  obj["priority"] = t.priority;
  obj["components"] = t.components;
  obj["created_at"] = format_timestamp(t.created_at);
  obj["assigned_at"] = t.assigned_at ? json(format_timestamp(*t.assigned_at)) : json(nullptr);
  obj["reporter"] = t.reporter;
  obj["assignee"] = t.assignee;
  obj["creator"] = t.creator;
  obj["title"] = t.title;
  obj["description"] = t.description;
  json comments = json::array();
  for (const auto& c : t.comments) comments.push_back({{"author", c.author}, {"at", format_timestamp(c.at)}, {"text", c.text}});
  obj["comments"] = std::move(comments);
  json histories = json::array();
  for (const auto& h : t.histories) histories.push_back({{"author", h.author}, {"at", format_timestamp(h.at)}});
  obj["histories"] = std::move(histories);
  json work = json::array();
  for (const auto& w : t.work_items)
    work.push_back({{"author", w.author}, {"at", format_timestamp(w.at)}, {"seconds", w.seconds_spent}});
  obj["work_items"] = std::move(work);
  return obj;
}

}  // namespace

std::string ticket_to_json(const RawTicket& ticket) { return ticket_json(ticket).dump(); }

LoadedCorpus load_corpus(const std::filesystem::path& tickets_path, const std::filesystem::path& commits_path) {
  LoadedCorpus corpus;

  std::ifstream tin(tickets_path);
  if (!tin) throw DataError("cannot read tickets file " + tickets_path.string());
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(tin, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Schema version is checked before per-record validation: a mismatch
    // means the whole file follows another contract.
    try {
      const auto probe = json::parse(line);
      if (probe.is_object() && probe.contains("schema_version") && probe["schema_version"] != kTicketSchemaVersion)
        throw DataError("tickets schema version mismatch at line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kTicketSchemaVersion) + ", found " + probe["schema_version"].dump());
    } catch (const json::parse_error&) {
    }
    try {
      RawTicket t = parse_ticket_json(line);
      if (!seen.insert(t.id).second) throw Error("duplicate ticket id " + t.id);
      corpus.tickets.push_back(std::move(t));
    } catch (const DataError& e) {
      corpus.rejections.push_back({"tickets", line_no, e.what()});
    } catch (const Error& e) {
      throw DataError(e.what());
    }
  }

  std::ifstream cin(commits_path);
  if (!cin) throw DataError("cannot read commits file " + commits_path.string());
  csv::Reader reader(cin);
  const auto header = reader.next();
  if (!header) return corpus;
  std::vector<std::size_t> idx;
  for (const auto name : kCommitColumns) {
    const auto it = std::find(header->begin(), header->end(), name);
    if (it == header->end()) throw DataError("commits schema mismatch: missing column '" + std::string(name) + "'");
    idx.push_back(static_cast<std::size_t>(it - header->begin()));
  }
  std::optional<std::size_t> files_idx;
  if (const auto it = std::find(header->begin(), header->end(), "files"); it != header->end())
    files_idx = static_cast<std::size_t>(it - header->begin());
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    try {
      corpus.commits.push_back(parse_commit_row(*row, idx, files_idx));
    } catch (const DataError& e) {
      corpus.rejections.push_back({"commits", reader.line(), e.what()});
    }
  }
  return corpus;
}

void write_commits_csv(std::ostream& out, std::span<const RawCommit> commits) {
  csv::Row header(std::begin(kCommitColumns), std::end(kCommitColumns));
  header.emplace_back("files");
  csv::write_row(out, header);
  for (const auto& c : commits) {
    const auto& m = c.jit;
    csv::write_row(out, {c.hash, c.author, format_timestamp(c.authored_at), csv::join(c.ticket_ids, ';'),
                         c.buggy ? "true" : "false", format_double(m.ns), format_double(m.nd), format_double(m.nf),
                         format_double(m.entropy), format_double(m.la), format_double(m.ld), format_double(m.ndev),
                         format_double(m.age), format_double(m.nuc), format_double(m.aexp), format_double(m.arexp),
                         format_double(m.asexp), m.fix ? "true" : "false", csv::join(c.files, ';')});
  }
}

void write_tickets_jsonl(std::ostream& out, std::span<const RawTicket> tickets) {
  for (const auto& t : tickets) out << ticket_to_json(t) << '\n';
}

void write_rejections_jsonl(std::ostream& out, std::span<const Rejection> rejections) {
  for (const auto& r : rejections) out << json{{"source", r.source}, {"line_no", r.line_no}, {"reason", r.reason}}.dump() << '\n';
}

LinkResult link_commits(std::span<const RawTicket> tickets, std::span<const RawCommit> commits) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tickets.size(); ++i) index.emplace(tickets[i].id, i);

  std::vector<std::vector<RawCommit>> per_ticket(tickets.size());
  LinkResult result;
  for (const auto& c : commits) {
    bool linked = false;
    std::set<std::string> distinct(c.ticket_ids.begin(), c.ticket_ids.end());
    for (const auto& id : distinct) {
      if (const auto it = index.find(id); it != index.end()) {
        per_ticket[it->second].push_back(c);
        linked = true;
      }
    }
    if (!linked) ++result.unlinked_commits;
  }
  for (std::size_t i = 0; i < tickets.size(); ++i) {
    if (per_ticket[i].empty()) {
      result.tickets_without_commits.push_back(tickets[i].id);
      continue;
    }
    std::sort(per_ticket[i].begin(), per_ticket[i].end(), commit_before);
    result.linked.push_back({tickets[i], std::move(per_ticket[i]), false});
  }
  return result;
}

bool is_bug_inducing(std::span<const RawCommit> commits) {
  return std::any_of(commits.begin(), commits.end(), [](const RawCommit& c) { return c.buggy; });
}

std::vector<LinkedTicket> label_tickets(std::vector<LinkedTicket> linked) {
  for (auto& t : linked) t.label = is_bug_inducing(t.commits);
  return linked;
}

std::string_view to_string(Filter filter) {
  switch (filter) {
    case Filter::ExclusiveBuggyCommitsOnly: return "ExclusiveBuggyCommitsOnly";
    case Filter::FirstCommitAfterOpeningDate: return "FirstCommitAfterOpeningDate";
    case Filter::ClearRepository: return "ClearRepository";
    case Filter::NoSnoring: return "NoSnoring";
    case Filter::CommitAfterOpeningDate: return "CommitAfterOpeningDate";
  }
  return "?";
}

Filter parse_filter(std::string_view name) {
  for (const auto f : default_filters())
    if (to_string(f) == name) return f;
  throw InvalidArgument("unknown filter '" + std::string(name) + "'");
}

std::vector<Filter> default_filters() {
  return {Filter::ExclusiveBuggyCommitsOnly, Filter::FirstCommitAfterOpeningDate, Filter::ClearRepository,
          Filter::NoSnoring, Filter::CommitAfterOpeningDate};
}

std::size_t FilterAudit::removed_by(Filter filter) const {
  return static_cast<std::size_t>(
      std::count_if(removals.begin(), removals.end(), [&](const FilterRemoval& r) { return r.filter == filter; }));
}

FilterOutcome apply_filters(std::vector<LinkedTicket> linked, std::span<const Filter> filters,
                            const FilterConfig& config) {
  FilterOutcome out;
  out.audit.input_size = linked.size();

  std::vector<Filter> active(filters.begin(), filters.end());
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  auto remove_if = [&](Filter filter, auto&& predicate) {
    std::vector<LinkedTicket> kept;
    kept.reserve(linked.size());
    for (auto& t : linked) {
      if (auto reason = predicate(t)) {
        out.audit.removals.push_back({filter, t.id(), *reason});
      } else {
        kept.push_back(std::move(t));
      }
    }
    linked = std::move(kept);
  };

  for (const Filter filter : active) {
    switch (filter) {
      case Filter::ExclusiveBuggyCommitsOnly:
        remove_if(filter, [](const LinkedTicket& t) -> std::optional<std::string> {
          bool any_buggy = false;
          for (const auto& c : t.commits) {
            if (!c.buggy) continue;
            any_buggy = true;
            std::set<std::string> ids(c.ticket_ids.begin(), c.ticket_ids.end());
            if (ids.size() <= 1) return std::nullopt;
          }
          if (!any_buggy) return std::nullopt;
          return "every buggy commit also implements another ticket";
        });
        break;
      case Filter::FirstCommitAfterOpeningDate:
        remove_if(filter, [&](const LinkedTicket& t) -> std::optional<std::string> {
          if (t.commits.empty()) return "no commits";
          const auto first = t.commits.front().authored_at;
          if (config.opening_date_literal_polarity) {
            if (first > t.ticket.created_at) return "first commit after opening date";
          } else if (first < t.ticket.created_at) {
            return "first commit predates opening date";
          }
          return std::nullopt;
        });
        break;
      case Filter::ClearRepository: {
        std::vector<LinkedTicket> kept;
        for (auto& t : linked) {
          const auto it = config.clear_repository.find(t.ticket.project);
          if (it == config.clear_repository.end()) {
            out.audit.errors.push_back({filter, t.id(), "repository clarity not declared for project '" + t.ticket.project + "'"});
            out.audit.removals.push_back({filter, t.id(), "repository clarity undeclared"});
          } else if (!it->second) {
            out.audit.removals.push_back({filter, t.id(), "main repository not established"});
          } else {
            kept.push_back(std::move(t));
          }
        }
        linked = std::move(kept);
        break;
      }
      case Filter::NoSnoring: {
        std::vector<std::size_t> order(linked.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        auto closed_at = [&](std::size_t i) { return linked[i].commits.back().authored_at; };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          if (closed_at(a) != closed_at(b)) return closed_at(a) < closed_at(b);
          return linked[a].id() < linked[b].id();
        });
        const auto drop = static_cast<std::size_t>(static_cast<double>(linked.size()) * config.snoring_fraction + 1e-9);
        std::vector<bool> dropped(linked.size(), false);
        for (std::size_t k = linked.size() - drop; k < linked.size(); ++k) dropped[order[k]] = true;
        std::vector<LinkedTicket> kept;
        for (std::size_t i = 0; i < linked.size(); ++i) {
          if (dropped[i]) {
            out.audit.removals.push_back({filter, linked[i].id(), "within the chronologically last tickets"});
          } else {
            kept.push_back(std::move(linked[i]));
          }
        }
        linked = std::move(kept);
        break;
      }
      case Filter::CommitAfterOpeningDate:
        remove_if(filter, [](const LinkedTicket& t) -> std::optional<std::string> {
          if (t.commits.empty()) return "no commits";
          if (t.commits.front().authored_at < t.ticket.created_at) return "first commit predates opening date";
          return std::nullopt;
        });
        break;
    }
  }
  out.audit.survivors = linked.size();
  out.survivors = std::move(linked);
  return out;
}

std::string audit_to_json(const FilterAudit& audit) {
  json obj;
  obj["input_size"] = audit.input_size;
  obj["survivors"] = audit.survivors;
  json per_filter = json::object();
  for (const auto f : default_filters()) {
    json ids = json::array();
    for (const auto& r : audit.removals)
      if (r.filter == f) ids.push_back(r.ticket_id);
    per_filter[std::string(to_string(f))] = {{"removed", ids.size()}, {"ticket_ids", ids}};
  }
  obj["filters"] = std::move(per_filter);
  json errors = json::array();
  for (const auto& e : audit.errors)
    errors.push_back({{"filter", std::string(to_string(e.filter))}, {"ticket_id", e.ticket_id}, {"reason", e.reason}});
  obj["errors"] = std::move(errors);
  return obj.dump(2);
}

void write_linked_jsonl(std::ostream& out, std::span<const LinkedTicket> linked) {
  for (const auto& t : linked) {
    json obj = ticket_json(t.ticket);
    obj["label"] = t.label;
    json hashes = json::array();
    for (const auto& c : t.commits) hashes.push_back(c.hash);
    obj["commit_hashes"] = std::move(hashes);
    out << obj.dump() << '\n';
  }
}

std::vector<LinkedTicket> load_linked(const std::filesystem::path& linked_path, std::span<const RawCommit> commits) {
  std::unordered_map<std::string, const RawCommit*> by_hash;
  for (const auto& c : commits) by_hash.emplace(c.hash, &c);
  std::ifstream in(linked_path);
  if (!in) throw DataError("cannot read " + linked_path.string());
  std::vector<LinkedTicket> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    LinkedTicket t;
    t.ticket = parse_ticket_json(line);
    const auto obj = json::parse(line);
    for (const auto& h : obj.at("commit_hashes")) {
      const auto it = by_hash.find(h.get<std::string>());
      if (it == by_hash.end())
        throw DataError(linked_path.string() + ":" + std::to_string(line_no) + ": unknown commit " + h.get<std::string>());
      t.commits.push_back(*it->second);
    }
    std::sort(t.commits.begin(), t.commits.end(), commit_before);
    t.label = obj.value("label", is_bug_inducing(t.commits));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace tlp
