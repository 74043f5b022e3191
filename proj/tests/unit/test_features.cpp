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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tlp/features.hpp"

namespace tlp {
namespace {

using namespace tlp::testing;

double num(const FeatureVector& v, std::string_view name) {
  const auto& cell = v.values[default_registry().index_of(name)];
  EXPECT_TRUE(std::holds_alternative<double>(cell)) << name;
  return std::holds_alternative<double>(cell) ? std::get<double>(cell) : kNaN;
}

// A closed ticket assigned to `who` whose last commit lands at `last`.
LinkedTicket closed_ticket(const std::string& id, const std::string& who, const char* last, bool buggy,
                           std::vector<std::string> components = {}) {
  auto t = ticket(id, "2018-01-01T00:00:00Z", "2018-01-01T01:00:00Z", who);
  t.components = std::move(components);
  return linked(t, {commit(id + "-c", last, {id}, buggy)});
}

TEST(Anfic, Ratio) {
  std::vector<LinkedTicket> h;
  for (int i = 0; i < 4; ++i) h.push_back(closed_ticket("A" + std::to_string(i), "dev", "2018-02-01T00:00:00Z", i == 0));
  h.push_back(closed_ticket("B", "other", "2018-02-01T00:00:00Z", true));
  EXPECT_DOUBLE_EQ(compute_anfic("dev", h), 0.25);
  EXPECT_DOUBLE_EQ(compute_anfic("nobody", h), 0.0);
  EXPECT_DOUBLE_EQ(compute_anfic("dev", {}), 0.0);
}

TEST(Anfic, BruteForceOverMixedAssignees) {
  std::vector<LinkedTicket> h;
  const char* devs[] = {"a", "b", "c"};
  for (int i = 0; i < 30; ++i)
    h.push_back(closed_ticket("T" + std::to_string(i), devs[(i * 7) % 3], "2018-02-01T00:00:00Z", (i * 5) % 4 == 0));
  for (const char* d : devs) {
    double n = 0, b = 0;
    for (const auto& t : h)
      if (t.ticket.assignee == d) {
        n += 1;
        b += t.label;
      }
    EXPECT_DOUBLE_EQ(compute_anfic(d, h), b / n) << d;
  }
}

TEST(TemporalLocality, UnweightedShare) {
  std::vector<LinkedTicket> h;
  for (int i = 0; i < 10; ++i) h.push_back(closed_ticket("T" + std::to_string(i), "d", "2018-03-01T00:00:00Z", i < 4));
  // One ticket outside the window does not count.
  h.push_back(closed_ticket("OLD", "d", "2017-01-01T00:00:00Z", true));
  EXPECT_DOUBLE_EQ(compute_temporal_locality(h, ts("2018-03-10T00:00:00Z"), 90, false), 0.4);
  EXPECT_DOUBLE_EQ(compute_temporal_locality({}, ts("2018-03-10T00:00:00Z"), 90, false), 0.0);
}

TEST(TemporalLocality, WeightedByAge) {
  // Window of 100 days: closing ages of 25 days (buggy) and 75 days (clean).
  // Closed instant = last commit + 1 s.
  const auto t = ts("2018-06-01T00:00:00Z");
  auto at = [&](int days) { return format_timestamp(t - Seconds{days * 86400 + 1}); };
  const std::vector<LinkedTicket> h = {closed_ticket("B", "d", at(25).c_str(), true),
                                       closed_ticket("C", "d", at(75).c_str(), false)};
  EXPECT_NEAR(compute_temporal_locality(h, t, 100, true), 0.75, 1e-12);
  EXPECT_NEAR(compute_temporal_locality(h, t, 100, false), 0.5, 1e-12);
}

TEST(Components, MaxBugginess) {
  std::vector<LinkedTicket> h = {
      closed_ticket("1", "d", "2018-02-01T00:00:00Z", true, {"A"}),
      closed_ticket("2", "d", "2018-02-01T00:00:00Z", true, {"A", "B"}),
      closed_ticket("3", "d", "2018-02-01T00:00:00Z", false, {"A", "B"}),
      closed_ticket("4", "d", "2018-02-01T00:00:00Z", false, {"A"}),
  };
  auto t = ticket("X", "2018-03-01T00:00:00Z");
  t.components = {"A", "B"};
  EXPECT_DOUBLE_EQ(components_max_bugginess(t, h), 0.5);
  t.components = {"NEW"};
  EXPECT_DOUBLE_EQ(components_max_bugginess(t, h), 0.0);
  t.components = {};
  EXPECT_DOUBLE_EQ(components_max_bugginess(t, h), 0.0);
}

TEST(Components, BruteForceThreeComponents) {
  std::vector<LinkedTicket> h;
  const std::vector<std::vector<std::string>> comps = {{"A"}, {"B"}, {"C"}, {"A", "C"}, {"B", "C"}};
  for (int i = 0; i < 25; ++i)
    h.push_back(closed_ticket("T" + std::to_string(i), "d", "2018-02-01T00:00:00Z", (i * 3) % 5 < 2, comps[i % 5]));
  auto t = ticket("X", "2018-03-01T00:00:00Z");
  t.components = {"A", "B", "C"};
  double best = 0;
  for (const std::string c : {"A", "B", "C"}) {
    double n = 0, b = 0;
    for (const auto& x : h)
      if (std::count(x.ticket.components.begin(), x.ticket.components.end(), c)) {
        n += 1;
        b += x.label;
      }
    best = std::max(best, b / n);
  }
  EXPECT_DOUBLE_EQ(components_max_bugginess(t, h), best);
}

TEST(Jit, Aggregates) {
  auto a = commit("a", "2018-01-01T00:00:00Z", {"X"}, false, 10, 1);
  auto b = commit("b", "2018-01-01T00:30:00Z", {"X"}, false, 20, 2);
  auto c = commit("c", "2018-01-01T01:00:00Z", {"X"}, false, 0, 0);
  a.jit.fix = b.jit.fix = true;
  a.jit.ndev = 3;
  b.jit.ndev = 5;
  a.jit.age = 4;
  c.jit.age = 2;
  const std::vector<RawCommit> commits = {a, b, c};
  const auto j = aggregate_jit(commits);
  EXPECT_DOUBLE_EQ(j.la_sum, 30);
  EXPECT_DOUBLE_EQ(j.ld_sum, 3);
  EXPECT_DOUBLE_EQ(j.fix_count, 2);
  EXPECT_DOUBLE_EQ(j.author_date_duration, 3600);
  EXPECT_DOUBLE_EQ(j.ndev_max, 5);
  EXPECT_DOUBLE_EQ(j.age_min, 0);
  EXPECT_DOUBLE_EQ(j.num_commits, 3);
  EXPECT_THROW(aggregate_jit({}), InvalidArgument);
}

// Target ticket T with two comments before the Open instant and three after.
LinkedTicket commented_ticket() {
  auto t = ticket("T", "2019-01-01T00:00:00Z", "2019-01-05T00:00:00Z");
  t.comments = {{"u1", ts("2019-01-02T00:00:00Z"), "first look"},
                {"u2", ts("2019-01-03T00:00:00Z"), "seems good"},
                {"u1", ts("2019-01-06T00:00:00Z"), "working"},
                {"u3", ts("2019-01-08T00:00:00Z"), "review"},
                {"u1", ts("2019-01-08T06:00:00Z"), "done"}};
  return linked(t, {commit("c1", "2019-01-07T00:00:00Z", {"T"}, false, 10, 1),
                    commit("c2", "2019-01-08T12:00:00Z", {"T"}, true, 20, 2)});
}

TEST(Extract, ActivityCountsRespectInstant) {
  const auto t = commented_ticket();
  const ExtractionContext ctx({t}, t.commits, RepoMetricsTimeline{});
  EXPECT_DOUBLE_EQ(num(extract_features(t, ProximityPoint::Open, ctx), feature::kComments), 2);
  EXPECT_DOUBLE_EQ(num(extract_features(t, ProximityPoint::InProgress, ctx), feature::kComments), 3);
  EXPECT_DOUBLE_EQ(num(extract_features(t, ProximityPoint::Closed, ctx), feature::kComments), 5);
}

TEST(Extract, JitAndAssignedMissingAtOpen) {
  const auto t = commented_ticket();
  const ExtractionContext ctx({t}, t.commits, RepoMetricsTimeline({{ts("2018-12-01T00:00:00Z"), 100, 10, 2, 5}}));
  const auto& reg = default_registry();
  const auto open = extract_features(t, ProximityPoint::Open, ctx);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const bool expected_missing = reg[i].availability != Stage::Open;
    EXPECT_EQ(is_missing(open.values[i]), expected_missing) << reg[i].code_name;
    missing += is_missing(open.values[i]);
  }
  EXPECT_EQ(missing, 15u + 8u);
  const auto closed = extract_features(t, ProximityPoint::Closed, ctx);
  EXPECT_DOUBLE_EQ(num(closed, feature::kJitLaSum), 30);
  EXPECT_DOUBLE_EQ(num(closed, feature::kNumCommits), 2);
}

TEST(Extract, TicketToTicketZeroWithoutHistory) {
  const auto t = commented_ticket();
  const ExtractionContext ctx({t}, t.commits, RepoMetricsTimeline{});
  const auto v = extract_features(t, ProximityPoint::Closed, ctx);
  for (const auto& name : default_registry().names_in(Family::TicketToTickets)) EXPECT_EQ(num(v, name), 0.0) << name;
}

TEST(Extract, WordlessDescriptionScoresZeroReadability) {
  auto t = commented_ticket();
  t.ticket.description = "";
  const ExtractionContext ctx({t}, t.commits, RepoMetricsTimeline{});
  for (const auto p : kAllPoints)
    EXPECT_EQ(num(extract_features(t, p, ctx), "nlp4re_description-EX_RDS"), 0.0) << to_string(p);
}

TEST(Extract, UndefinedSnapshotThrows) {
  auto t = commented_ticket();
  t.ticket.assigned_at.reset();
  const ExtractionContext ctx({t}, t.commits, RepoMetricsTimeline{});
  EXPECT_THROW(extract_features(t, ProximityPoint::Open, ctx), InvalidArgument);
}

TEST(Extract, AppendingLaterEventsChangesNothing) {
  const auto base = commented_ticket();
  auto other = closed_ticket("O", "alice", "2018-12-01T00:00:00Z", true);
  const ExtractionContext ctx({base, other}, {base.commits[0], base.commits[1], other.commits[0]},
                              RepoMetricsTimeline({{ts("2018-06-01T00:00:00Z"), 100, 10, 2, 5}}));
  auto grown = base;
  const auto later = ts("2019-03-01T00:00:00Z");
  grown.ticket.comments.push_back({"late", later, "after everything, good stuff"});
  grown.ticket.histories.push_back({"late", later});
  grown.ticket.work_items.push_back({"late", later, 3600});
  auto late_commit = commit("zz", "2019-03-01T00:00:00Z", {"O2"}, true, 1000, 1000);
  auto late_ticket = closed_ticket("O2", "alice", "2019-03-01T00:00:00Z", true);
  const ExtractionContext ctx2(
      {grown, other, late_ticket}, {base.commits[0], base.commits[1], other.commits[0], late_commit},
      RepoMetricsTimeline({{ts("2018-06-01T00:00:00Z"), 100, 10, 2, 5}, {ts("2019-02-20T00:00:00Z"), 900, 90, 4, 50}}));
  for (const auto p : kAllPoints) {
    EXPECT_EQ(extract_features(base, p, ctx).values, extract_features(grown, p, ctx2).values) << to_string(p);
  }
}

TEST(Matrix, MaskingMonotoneAcrossPoints) {
  std::vector<LinkedTicket> pop;
  for (int i = 0; i < 6; ++i) {
    auto t = commented_ticket();
    t.ticket.id = "T" + std::to_string(i);
    for (auto& c : t.commits) c.ticket_ids = {t.ticket.id};
    pop.push_back(t);
  }
  std::vector<RawCommit> commits;
  for (const auto& t : pop) commits.insert(commits.end(), t.commits.begin(), t.commits.end());
  const ExtractionContext ctx(pop, commits, RepoMetricsTimeline{});
  std::size_t prev = default_registry().size() + 1;
  for (const auto p : kAllPoints) {
    const auto m = build_feature_matrix(ctx, p, 2);
    ASSERT_EQ(m.rows.size(), 6u);
    std::size_t missing = 0;
    for (const auto& cell : m.rows[0].values) missing += is_missing(cell);
    EXPECT_LE(missing, prev) << to_string(p);
    prev = missing;
  }
}

TEST(Matrix, CsvRoundTripAndThreadInvariance) {
  std::vector<LinkedTicket> pop = {commented_ticket(), closed_ticket("O", "alice", "2018-12-01T00:00:00Z", true)};
  std::vector<RawCommit> commits = {pop[0].commits[0], pop[0].commits[1], pop[1].commits[0]};
  const ExtractionContext ctx(pop, commits, RepoMetricsTimeline{});
  const auto one = build_feature_matrix(ctx, ProximityPoint::Closed, 1);
  const auto many = build_feature_matrix(ctx, ProximityPoint::Closed, 4);
  std::ostringstream a, b;
  write_feature_matrix(a, one);
  write_feature_matrix(b, many);
  EXPECT_EQ(a.str(), b.str());
  const auto dir = temp_dir("matrix_rt");
  std::ofstream(dir / "m.csv") << a.str();
  const auto back = read_feature_matrix(dir / "m.csv");
  ASSERT_EQ(back.rows.size(), one.rows.size());
  for (std::size_t r = 0; r < back.rows.size(); ++r) {
    EXPECT_EQ(back.rows[r].ticket_id, one.rows[r].ticket_id);
    EXPECT_EQ(back.rows[r].label, one.rows[r].label);
    EXPECT_EQ(back.rows[r].values, one.rows[r].values);
  }
}

TEST(Timeline, LookupAndValidation) {
  const RepoMetricsTimeline tl({{ts("2019-01-01T00:00:00Z"), 10, 1, 1, 0}, {ts("2019-02-01T00:00:00Z"), 20, 2, 1, 3}});
  EXPECT_FALSE(tl.lookup(ts("2018-12-31T00:00:00Z")));
  EXPECT_DOUBLE_EQ(tl.lookup(ts("2019-01-15T00:00:00Z"))->total_locs, 10);
  EXPECT_DOUBLE_EQ(tl.lookup(ts("2019-02-01T00:00:00Z"))->smells_count, 3);
  EXPECT_THROW(RepoMetricsTimeline({{ts("2019-02-01T00:00:00Z"), 1, 1, 1, 1}, {ts("2019-01-01T00:00:00Z"), 1, 1, 1, 1}}),
               DataError);
  std::ostringstream out;
  tl.write(out);
  std::istringstream in(out.str());
  EXPECT_EQ(RepoMetricsTimeline::read(in).records().size(), 2u);
}

}  // namespace
}  // namespace tlp
