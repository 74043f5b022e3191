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

#include <cmath>
#include <map>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tlp/power.hpp"

namespace tlp {
namespace {

double h_bits(const std::map<int, double>& counts, double n) {
  double h = 0;
  for (const auto& [k, c] : counts)
    if (c > 0) h -= c / n * std::log2(c / n);
  return h;
}

// (H(Y) - H(Y|X)) / H(X) by counting.
double brute_igr(const std::vector<int>& x, const std::vector<int>& y) {
  const double n = static_cast<double>(x.size());
  std::map<int, double> cx, cy;
  std::map<int, std::map<int, double>> joint;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cx[x[i]] += 1;
    cy[y[i]] += 1;
    joint[x[i]][y[i]] += 1;
  }
  const double hx = h_bits(cx, n);
  if (hx == 0) return 0;
  double hyx = 0;
  for (const auto& [v, cnt] : joint) hyx += cx[v] / n * h_bits(cnt, cx[v]);
  return (h_bits(cy, n) - hyx) / hx;
}

TEST(Igr, PerfectAndConstant) {
  const std::vector<int> y = {0, 1, 0, 1, 1, 0};
  EXPECT_NEAR(information_gain_ratio(y, y), 1.0, 1e-12);
  EXPECT_EQ(information_gain_ratio(std::vector<int>(6, 2), y), 0.0);
}

TEST(Igr, MatchesCountingOracle) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(49);
    const std::size_t cats = 1 + rng.below(5);
    std::vector<int> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<int>(rng.below(cats));
      y[i] = rng.uniform() < 0.5;
    }
    EXPECT_NEAR(information_gain_ratio(x, y), brute_igr(x, y), 1e-9);
  }
}

TEST(Igr, DiscretizeKinds) {
  const std::vector<FeatureValue> cat = {std::string("a"), std::string("b"), Missing{}, std::string("a")};
  const auto codes = discretize(cat, ValueKind::Categorical);
  EXPECT_EQ(codes[0], codes[3]);
  EXPECT_NE(codes[0], codes[1]);
  EXPECT_NE(codes[2], codes[0]);
  EXPECT_NE(codes[2], codes[1]);
  std::vector<FeatureValue> numeric;
  for (int i = 0; i < 20; ++i) numeric.push_back(static_cast<double>(i));
  std::vector<int> y(20);
  for (int i = 0; i < 20; ++i) y[i] = i >= 10;
  EXPECT_NEAR(information_gain_ratio(numeric, y, ValueKind::Numeric, 2), 1.0, 1e-12);
}

TEST(Ranking, TiesAndTopK) {
  std::vector<IgrRecord> recs;
  const auto& reg = default_registry();
  for (std::size_t i = 0; i < 12; ++i)
    recs.push_back({0, ProximityPoint::Closed, reg[i].code_name, reg[i].family, i < 2 ? 0.5 : 0.1 * (i % 3), true});
  const auto r = rank_features(recs);
  EXPECT_EQ(r.ranked.size(), 12u);
  EXPECT_EQ(r.top(10).size(), 10u);
  EXPECT_LT(r.ranked[0].feature, r.ranked[1].feature);  // equal IGR: name order
  EXPECT_EQ(r.ranked[0].rank, 1u);
  EXPECT_EQ(r.bottom(3).size(), 3u);
  EXPECT_EQ(r.bottom(3).back().rank, 12u);
}

TEST(Ranking, UnavailableExcluded) {
  std::vector<IgrRecord> recs = {{0, ProximityPoint::Open, "jit-la-SUM", Family::Jit, 0, false},
                                 {0, ProximityPoint::Open, "priority", Family::Intrinsic, 0.2, true}};
  const auto r = rank_features(recs);
  ASSERT_EQ(r.ranked.size(), 1u);
  EXPECT_EQ(r.ranked[0].feature, "priority");
}

TEST(Ranking, MeanAcrossWindows) {
  std::vector<IgrRecord> recs = {{0, ProximityPoint::Closed, "priority", Family::Intrinsic, 0.1, true},
                                 {1, ProximityPoint::Closed, "priority", Family::Intrinsic, 0.3, true},
                                 {0, ProximityPoint::Closed, "type", Family::Intrinsic, 0.25, true},
                                 {1, ProximityPoint::Closed, "type", Family::Intrinsic, 0.05, true},
                                 {0, ProximityPoint::Open, "type", Family::Intrinsic, 0.9, true}};
  const auto r = rank_by_mean(recs, ProximityPoint::Closed);
  ASSERT_EQ(r.ranked.size(), 2u);
  EXPECT_EQ(r.ranked[0].feature, "priority");
  EXPECT_NEAR(r.ranked[0].igr, 0.2, 1e-12);
}

TEST(Family, MeanAndMax) {
  const auto names = default_registry().names_in(Family::Code);
  std::vector<IgrRecord> recs = {{0, ProximityPoint::Closed, names[0], Family::Code, 0.2, true},
                                 {0, ProximityPoint::Closed, names[1], Family::Code, 0.4, true},
                                 {0, ProximityPoint::Closed, "priority", Family::Intrinsic, 0.7, true}};
  const auto agg = family_aggregate(recs);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_EQ(agg[0].family, Family::Code);
  EXPECT_NEAR(agg[0].mean, 0.3, 1e-12);
  EXPECT_NEAR(agg[0].max, 0.4, 1e-12);
  EXPECT_NEAR(agg[1].mean, 0.7, 1e-12);
  recs.push_back({0, ProximityPoint::Closed, "bogus", Family::Code, 0.1, true});
  EXPECT_THROW(family_aggregate(recs), UnknownFeature);
}

TEST(Family, JitZeroAtOpenFromMatrix) {
  using namespace tlp::testing;
  std::vector<LinkedTicket> pop;
  std::vector<RawCommit> commits;
  for (int i = 0; i < 30; ++i) {
    const std::string id = "T" + std::to_string(100 + i);
    const int d = i % 28 + 1;
    const std::string day = "2019-02-" + std::string(d < 10 ? "0" : "") + std::to_string(d);
    auto t = ticket(id, (day + "T00:00:00Z").c_str(), (day + "T01:00:00Z").c_str());
    t.priority = i % 2 ? "Major" : "Minor";
    auto c = commit(id + "c", (day + "T05:00:00Z").c_str(), {id}, i % 3 == 0, 10 + i);
    commits.push_back(c);
    pop.push_back(linked(t, {c}));
  }
  const ExtractionContext ctx(pop, commits, RepoMetricsTimeline{});
  const auto m = build_feature_matrix(ctx, ProximityPoint::Open, 1);
  const auto recs = compute_igr(m, {20, 5, 0.8});
  for (const auto& a : family_aggregate(recs))
    if (a.family == Family::Jit) {
      EXPECT_EQ(a.mean, 0.0);
      EXPECT_EQ(a.max, 0.0);
    }
  for (const auto& r : recs)
    if (r.family == Family::Jit) EXPECT_FALSE(r.available);
}

TEST(Friedman, PerfectOrdering) {
  std::vector<std::vector<double>> blocks(10, {1, 2, 3});
  const auto r = friedman_test(blocks);
  EXPECT_NEAR(r.chi_square, 20.0, 1e-9);
  EXPECT_EQ(r.kendalls_w, 1.0);
  EXPECT_NEAR(r.p_value, 4.54e-5, 1e-6);
  EXPECT_EQ(r.df, 2.0);
}

TEST(Friedman, AllTied) {
  std::vector<std::vector<double>> blocks(5, {0.3, 0.3, 0.3});
  const auto r = friedman_test(blocks);
  EXPECT_EQ(r.chi_square, 0.0);
  EXPECT_EQ(r.kendalls_w, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Friedman, MatchesReferenceWithTies) {
  const std::vector<std::vector<double>> a = {{0.81, 0.72, 0.93}, {0.64, 0.70, 0.88}, {0.77, 0.77, 0.90},
                                              {0.59, 0.66, 0.61}, {0.80, 0.74, 0.95}, {0.70, 0.71, 0.85}};
  const auto r = friedman_test(a);
  EXPECT_NEAR(r.chi_square, 6.869565217391299, 1e-9);
  EXPECT_NEAR(r.p_value, 0.03223241651740552, 1e-9);
  const std::vector<std::vector<double>> b = {{1, 2, 3, 4}, {2, 1, 4, 3}, {1, 3, 2, 4}, {1, 2, 4, 3}, {2, 1, 3, 4}};
  const auto rb = friedman_test(b);
  EXPECT_NEAR(rb.chi_square, 10.2, 1e-9);
  EXPECT_NEAR(rb.p_value, 0.016940373522533844, 1e-9);
  EXPECT_NEAR(rb.kendalls_w, 10.2 / (5 * 3), 1e-12);
}

TEST(Friedman, DropsNanBlocksAndValidates) {
  std::vector<std::vector<double>> blocks(4, {1, 2});
  blocks.push_back({kNaN, 1});
  EXPECT_EQ(friedman_test(blocks).blocks, 4u);
  EXPECT_THROW(friedman_test({{1, 2}}), InvalidArgument);
  EXPECT_THROW(friedman_test({{1}, {2}}), InvalidArgument);
}

// One feature per family; value(window, family index, point).
template <class F>
std::vector<IgrRecord> two_family_records(std::size_t windows, F value) {
  const auto code = default_registry().names_in(Family::Code)[0];
  std::vector<IgrRecord> recs;
  for (std::size_t w = 0; w < windows; ++w)
    for (const auto p : kAllPoints) {
      recs.push_back({w, p, code, Family::Code, value(w, 0, p), true});
      recs.push_back({w, p, "priority", Family::Intrinsic, value(w, 1, p), true});
    }
  return recs;
}

TEST(TwoWay, ConstantGivesNoEffect) {
  const auto recs = two_family_records(6, [](std::size_t, int, ProximityPoint) { return 0.2; });
  const auto r = two_way_power_analysis(recs);
  EXPECT_EQ(r.family.p_value, 1.0);
  EXPECT_EQ(r.point.p_value, 1.0);
  EXPECT_EQ(r.interaction.p_value, 1.0);
  EXPECT_EQ(r.windows, 6u);
}

TEST(TwoWay, FamilyDominance) {
  const auto recs = two_family_records(6, [](std::size_t w, int f, ProximityPoint p) {
    return (f == 0 ? 0.4 : 0.1) + 0.01 * static_cast<double>((w * 3 + static_cast<int>(p)) % 5);
  });
  const auto r = two_way_power_analysis(recs);
  EXPECT_LT(r.family.p_value, 0.05);
}

TEST(TwoWay, Crossover) {
  // Family 0 only wins at Closed.
  const auto recs = two_family_records(6, [](std::size_t w, int f, ProximityPoint p) {
    const double noise = 0.001 * static_cast<double>((w * 7 + f * 3 + static_cast<int>(p)) % 4);
    if (f == 0) return (p == ProximityPoint::Closed ? 0.5 : 0.1) + noise;
    return 0.3 + noise;
  });
  const auto r = two_way_power_analysis(recs);
  EXPECT_LT(r.interaction.p_value, 0.05);
}

TEST(TwoWay, NeedsEnoughStructure) {
  const auto recs = two_family_records(1, [](std::size_t, int, ProximityPoint) { return 0.2; });
  EXPECT_THROW(two_way_power_analysis(recs), InvalidArgument);
}

TEST(IgrCsv, RoundTrip) {
  const std::vector<IgrRecord> recs = {{0, ProximityPoint::Open, "priority", Family::Intrinsic, 0.125, true},
                                       {0, ProximityPoint::Open, "jit-la-SUM", Family::Jit, 0, false}};
  const auto dir = testing::temp_dir("igr_rt");
  {
    std::ofstream out(dir / "igr.csv");
    write_igr_csv(out, recs);
  }
  const auto back = read_igr_csv(dir / "igr.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].feature, "priority");
  EXPECT_EQ(back[0].igr, 0.125);
  EXPECT_FALSE(back[1].available);
}

}  // namespace
}  // namespace tlp
