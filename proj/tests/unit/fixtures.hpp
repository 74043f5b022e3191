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

// Small builders shared by the unit tests.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlp/corpus.hpp"

namespace tlp::testing {

inline Timestamp ts(const char* text) { return parse_timestamp(text); }

inline RawTicket ticket(std::string id, const char* created, const char* assigned = nullptr,
                        std::string assignee = "alice") {
  RawTicket t;
  t.id = std::move(id);
  t.project = "P";
  t.type = "Bug";
  t.priority = "Major";
  t.created_at = ts(created);
  if (assigned) {
    t.assigned_at = ts(assigned);
    t.assignee = std::move(assignee);
  }
  t.reporter = "rita";
  t.creator = "rita";
  t.title = "Fix crash in parser";
  t.description = "The parser should not crash.";
  return t;
}

inline RawCommit commit(std::string hash, const char* at, std::vector<std::string> tickets, bool buggy = false,
                        double la = 10, double ld = 2) {
  RawCommit c;
  c.hash = std::move(hash);
  c.author = "alice";
  c.authored_at = ts(at);
  c.ticket_ids = std::move(tickets);
  c.buggy = buggy;
  c.jit.la = la;
  c.jit.ld = ld;
  c.jit.nf = 1;
  c.jit.ns = 1;
  c.jit.nd = 1;
  return c;
}

inline LinkedTicket linked(RawTicket t, std::vector<RawCommit> commits) {
  LinkedTicket l;
  l.ticket = std::move(t);
  l.commits = std::move(commits);
  l.label = is_bug_inducing(l.commits);
  return l;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tlp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tlp::testing
