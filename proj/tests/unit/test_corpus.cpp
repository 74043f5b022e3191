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


#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tlp/corpus.hpp"

namespace tlp {
namespace {

using namespace tlp::testing;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string commits_csv(const std::vector<RawCommit>& commits) {
  std::ostringstream out;
  write_commits_csv(out, commits);
  return out.str();
}

TEST(LoadCorpus, EmptyTicketsFile) {
  const auto dir = temp_dir("corpus_empty");
  write_text(dir / "t.jsonl", "");
  write_text(dir / "c.csv", commits_csv({}));
  const auto corpus = load_corpus(dir / "t.jsonl", dir / "c.csv");
  EXPECT_TRUE(corpus.tickets.empty());
  EXPECT_TRUE(corpus.rejections.empty());
}

TEST(LoadCorpus, OneWellFormedTicket) {
  const auto dir = temp_dir("corpus_one");
  const auto t = ticket("P-1", "2019-01-01T00:00:00Z", "2019-01-02T00:00:00Z");
  write_text(dir / "t.jsonl", ticket_to_json(t) + "\n");
  write_text(dir / "c.csv", commits_csv({}));
  const auto corpus = load_corpus(dir / "t.jsonl", dir / "c.csv");
  ASSERT_EQ(corpus.tickets.size(), 1u);
  EXPECT_EQ(corpus.tickets[0].id, "P-1");
  EXPECT_EQ(corpus.tickets[0].assigned_at, t.assigned_at);
  EXPECT_EQ(corpus.tickets[0].title, t.title);
}

TEST(LoadCorpus, MissingCreatedAtIsRejectedWithLine) {
  const auto dir = temp_dir("corpus_reject");
  std::string text = ticket_to_json(ticket("P-1", "2019-01-01T00:00:00Z")) + "\n";
  text += R"({"id":"P-2","project":"P","type":"Bug","priority":"Major"})" "\n";
  text += ticket_to_json(ticket("P-3", "2019-01-03T00:00:00Z")) + "\n";
  write_text(dir / "t.jsonl", text);
  write_text(dir / "c.csv", commits_csv({}));
  const auto corpus = load_corpus(dir / "t.jsonl", dir / "c.csv");
  EXPECT_EQ(corpus.tickets.size(), 2u);
  ASSERT_EQ(corpus.rejections.size(), 1u);
  EXPECT_EQ(corpus.rejections[0].line_no, 2u);
  EXPECT_EQ(corpus.rejections[0].source, "tickets");
}

TEST(LoadCorpus, SchemaVersionMismatchIsFatal) {
  const auto dir = temp_dir("corpus_schema");
  write_text(dir / "t.jsonl", R"({"schema_version":99,"id":"P-1","created_at":"2019-01-01T00:00:00Z"})" "\n");
  write_text(dir / "c.csv", commits_csv({}));
  EXPECT_THROW(load_corpus(dir / "t.jsonl", dir / "c.csv"), DataError);
}

TEST(LoadCorpus, MissingFileNamesPath) {
  const auto dir = temp_dir("corpus_missing");
  try {
    load_corpus(dir / "nope.jsonl", dir / "c.csv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.jsonl"), std::string::npos);
  }
}

TEST(LoadCorpus, CommitsRoundTripAndBadRowsRejected) {
  const auto dir = temp_dir("corpus_commits");
  auto c = commit("abc", "2019-01-05T00:00:00Z", {"P-1", "P-2"}, true, 12, 3);
  c.jit.fix = true;
  c.jit.entropy = 0.5;
  std::string text = commits_csv({c});
  text += "def,bob,not-a-time,P-1,false,1,1,1,0,1,1,1,1,1,1,1,1,false\n";
  write_text(dir / "t.jsonl", "");
  write_text(dir / "c.csv", text);
  const auto corpus = load_corpus(dir / "t.jsonl", dir / "c.csv");
  ASSERT_EQ(corpus.commits.size(), 1u);
  EXPECT_EQ(corpus.commits[0].ticket_ids, (std::vector<std::string>{"P-1", "P-2"}));
  EXPECT_TRUE(corpus.commits[0].buggy);
  EXPECT_TRUE(corpus.commits[0].jit.fix);
  EXPECT_DOUBLE_EQ(corpus.commits[0].jit.la, 12);
  EXPECT_DOUBLE_EQ(corpus.commits[0].jit.entropy, 0.5);
  ASSERT_EQ(corpus.rejections.size(), 1u);
  EXPECT_EQ(corpus.rejections[0].source, "commits");
}

TEST(Link, TicketWithoutCommitsIsExcluded) {
  const std::vector<RawTicket> tickets = {ticket("P-1", "2019-01-01T00:00:00Z")};
  const auto result = link_commits(tickets, {});
  EXPECT_TRUE(result.linked.empty());
  EXPECT_EQ(result.tickets_without_commits, (std::vector<std::string>{"P-1"}));
}

TEST(Link, CommitsSortedByTime) {
  const std::vector<RawTicket> tickets = {ticket("P-1", "2019-01-01T00:00:00Z")};
  const std::vector<RawCommit> commits = {commit("b", "2019-01-03T00:00:00Z", {"P-1"}),
                                          commit("a", "2019-01-02T00:00:00Z", {"P-1"})};
  const auto result = link_commits(tickets, commits);
  ASSERT_EQ(result.linked.size(), 1u);
  ASSERT_EQ(result.linked[0].commits.size(), 2u);
  EXPECT_EQ(result.linked[0].commits[0].hash, "a");
  EXPECT_EQ(result.linked[0].commits[1].hash, "b");
}

TEST(Link, SharedCommitAppearsInBothTickets) {
  const std::vector<RawTicket> tickets = {ticket("A", "2019-01-01T00:00:00Z"), ticket("B", "2019-01-01T00:00:00Z")};
  const std::vector<RawCommit> commits = {commit("x", "2019-01-02T00:00:00Z", {"A", "B"}),
                                          commit("y", "2019-01-02T00:00:00Z", {"Z"})};
  const auto result = link_commits(tickets, commits);
  ASSERT_EQ(result.linked.size(), 2u);
  EXPECT_EQ(result.linked[0].commits[0].hash, "x");
  EXPECT_EQ(result.linked[1].commits[0].hash, "x");
  EXPECT_EQ(result.unlinked_commits, 1u);
}

TEST(Label, AnyBuggyCommit) {
  const auto t = ticket("A", "2019-01-01T00:00:00Z");
  std::vector<LinkedTicket> linked = {
      {t, {commit("1", "2019-01-02T00:00:00Z", {"A"}), commit("2", "2019-01-03T00:00:00Z", {"A"})}, true},
      {t, {commit("3", "2019-01-02T00:00:00Z", {"A"}, true), commit("4", "2019-01-03T00:00:00Z", {"A"})}, false},
      {t, {commit("5", "2019-01-02T00:00:00Z", {"A"}, true)}, false},
  };
  const auto labeled = label_tickets(linked);
  EXPECT_FALSE(labeled[0].label);
  EXPECT_TRUE(labeled[1].label);
  EXPECT_TRUE(labeled[2].label);
}

FilterConfig clear_p() {
  FilterConfig config;
  config.clear_repository["P"] = true;
  return config;
}

// Ticket Ti created at midnight of `day`, one clean commit at `day`.
LinkedTicket linked_ticket_helper(int i, const std::string& day) {
  const std::string id = "T" + std::to_string(i);
  auto t = ticket(id, (day.substr(0, 10) + "T00:00:00Z").c_str(), (day.substr(0, 10) + "T01:00:00Z").c_str());
  return linked(t, {commit("h" + std::to_string(i), day.c_str(), {id})});
}

TEST(Filters, NoSnoringDropsLatestFifth) {
  std::vector<LinkedTicket> linked;
  for (int i = 0; i < 10; ++i) {
    const std::string day = "2019-01-" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1) + "T12:00:00Z";
    linked.push_back(linked_ticket_helper(i, day));
  }
  const Filter only[] = {Filter::NoSnoring};
  const auto out = apply_filters(linked, only, clear_p());
  ASSERT_EQ(out.survivors.size(), 8u);
  EXPECT_EQ(out.audit.removed_by(Filter::NoSnoring), 2u);
  for (const auto& r : out.audit.removals) EXPECT_TRUE(r.ticket_id == "T8" || r.ticket_id == "T9") << r.ticket_id;
}


TEST(Filters, SharedBuggyCommitRemovedByExclusiveFilter) {
  std::vector<LinkedTicket> in = {
      linked(ticket("A", "2019-01-01T00:00:00Z", "2019-01-01T01:00:00Z"),
             {commit("x", "2019-01-02T00:00:00Z", {"A", "B"}, true)}),
      linked(ticket("C", "2019-01-01T00:00:00Z", "2019-01-01T01:00:00Z"),
             {commit("y", "2019-01-02T00:00:00Z", {"C"}, true)}),
  };
  const Filter only[] = {Filter::ExclusiveBuggyCommitsOnly};
  const auto out = apply_filters(in, only, clear_p());
  ASSERT_EQ(out.survivors.size(), 1u);
  EXPECT_EQ(out.survivors[0].id(), "C");
  ASSERT_EQ(out.audit.removals.size(), 1u);
  EXPECT_EQ(out.audit.removals[0].ticket_id, "A");
}

TEST(Filters, CommitBeforeOpeningRemoved) {
  std::vector<LinkedTicket> in = {
      linked(ticket("A", "2019-01-05T00:00:00Z"), {commit("x", "2019-01-04T00:00:00Z", {"A"})}),
      linked(ticket("B", "2019-01-05T00:00:00Z"), {commit("y", "2019-01-06T00:00:00Z", {"B"})}),
  };
  for (const Filter f : {Filter::FirstCommitAfterOpeningDate, Filter::CommitAfterOpeningDate}) {
    const Filter only[] = {f};
    const auto out = apply_filters(in, only, clear_p());
    ASSERT_EQ(out.survivors.size(), 1u) << to_string(f);
    EXPECT_EQ(out.survivors[0].id(), "B");
  }
  // The literal reading flips the first-commit filter.
  auto config = clear_p();
  config.opening_date_literal_polarity = true;
  const Filter only[] = {Filter::FirstCommitAfterOpeningDate};
  const auto out = apply_filters(in, only, config);
  ASSERT_EQ(out.survivors.size(), 1u);
  EXPECT_EQ(out.survivors[0].id(), "A");
}

TEST(Filters, UndeclaredRepositoryIsAnError) {
  std::vector<LinkedTicket> in = {
      linked(ticket("A", "2019-01-05T00:00:00Z"), {commit("x", "2019-01-06T00:00:00Z", {"A"})}),
  };
  in[0].ticket.project = "Q";
  const Filter only[] = {Filter::ClearRepository};
  const auto out = apply_filters(in, only, clear_p());
  EXPECT_TRUE(out.survivors.empty());
  ASSERT_EQ(out.audit.errors.size(), 1u);
  EXPECT_EQ(out.audit.errors[0].ticket_id, "A");

  FilterConfig unclear;
  unclear.clear_repository["Q"] = false;
  const auto out2 = apply_filters(in, only, unclear);
  EXPECT_TRUE(out2.survivors.empty());
  EXPECT_TRUE(out2.audit.errors.empty());
  EXPECT_EQ(out2.audit.removed_by(Filter::ClearRepository), 1u);
}

TEST(Filters, AuditCountsAddUp) {
  std::vector<LinkedTicket> in;
  for (int i = 0; i < 10; ++i) in.push_back(linked_ticket_helper(i, "2019-02-1" + std::to_string(i) + "T12:00:00Z"));
  in[3].commits[0].ticket_ids.push_back("OTHER");
  in[3].commits[0].buggy = true;
  in[3].label = true;
  const auto filters = default_filters();
  const auto out = apply_filters(in, filters, clear_p());
  EXPECT_EQ(out.audit.input_size, 10u);
  EXPECT_EQ(out.audit.survivors, out.survivors.size());
  EXPECT_EQ(out.audit.survivors + out.audit.removals.size(), 10u);
  EXPECT_NE(audit_to_json(out.audit).find("NoSnoring"), std::string::npos);
}

TEST(Filters, ParseNames) {
  for (const Filter f : default_filters()) EXPECT_EQ(parse_filter(to_string(f)), f);
  EXPECT_THROW(parse_filter("Nope"), InvalidArgument);
}

TEST(Linked, JsonlRoundTrip) {
  const auto c1 = commit("x", "2019-01-02T00:00:00Z", {"A"}, true);
  const auto c2 = commit("y", "2019-01-03T00:00:00Z", {"A"});
  const std::vector<LinkedTicket> in = {linked(ticket("A", "2019-01-01T00:00:00Z", "2019-01-01T05:00:00Z"), {c1, c2})};
  const auto dir = temp_dir("linked_rt");
  {
    std::ofstream out(dir / "linked.jsonl");
    write_linked_jsonl(out, in);
  }
  const std::vector<RawCommit> all = {c2, c1};
  const auto back = load_linked(dir / "linked.jsonl", all);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id(), "A");
  EXPECT_TRUE(back[0].label);
  ASSERT_EQ(back[0].commits.size(), 2u);
  EXPECT_EQ(back[0].commits[0].hash, "x");
}

}  // namespace
}  // namespace tlp
