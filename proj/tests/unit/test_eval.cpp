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
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tlp/eval.hpp"

namespace tlp {
namespace {

TEST(Windows, ExactlyInitial) {
  const auto plan = plan_windows(1000);
  ASSERT_EQ(plan.windows.size(), 1u);
  EXPECT_TRUE(plan.standard);
  EXPECT_EQ(plan.windows[0].train_begin, 0u);
  EXPECT_EQ(plan.windows[0].train_end, 800u);
  EXPECT_EQ(plan.windows[0].test_begin, 800u);
  EXPECT_EQ(plan.windows[0].test_end, 1000u);
}

TEST(Windows, ThreeWindowsStartEveryStep) {
  const auto plan = plan_windows(1400);
  ASSERT_EQ(plan.windows.size(), 3u);
  EXPECT_EQ(plan.windows[0].train_begin, 0u);
  EXPECT_EQ(plan.windows[1].train_begin, 200u);
  EXPECT_EQ(plan.windows[2].train_begin, 400u);
  EXPECT_EQ(plan.windows[2].test_end, 1400u);
}

TEST(Windows, LeftoverExtendsFinalTestRange) {
  // 100 leftover rows are fewer than a step: they join the last test range.
  const auto plan = plan_windows(1100);
  ASSERT_EQ(plan.windows.size(), 1u);
  EXPECT_EQ(plan.windows[0].test_begin, 800u);
  EXPECT_EQ(plan.windows[0].test_end, 1100u);
}

TEST(Windows, CountFormulaAndCoverage) {
  for (std::size_t n = 1000; n <= 3000; n += 37) {
    const auto plan = plan_windows(n);
    EXPECT_EQ(plan.windows.size(), (n - 1000) / 200 + 1) << n;
    EXPECT_EQ(plan.windows.back().test_end, n);
    for (const auto& w : plan.windows) {
      EXPECT_EQ(w.train_size(), 800u);
      EXPECT_EQ(w.train_end, w.test_begin);
    }
  }
}

TEST(Windows, SmallCorpusSingleHoldout) {
  const auto plan = plan_windows(50);
  ASSERT_EQ(plan.windows.size(), 1u);
  EXPECT_FALSE(plan.standard);
  EXPECT_EQ(plan.windows[0].train_end, 40u);
  EXPECT_EQ(plan.windows[0].test_end, 50u);
  EXPECT_THROW(plan_windows(1), InvalidArgument);
}

// y/scores with the requested confusion counts at threshold 0.5.
void confusion(int tp, int fp, int fn, int tn, std::vector<int>& y, std::vector<double>& s) {
  y.clear();
  s.clear();
  auto add = [&](int n, int label, double score) {
    for (int i = 0; i < n; ++i) {
      y.push_back(label);
      s.push_back(score);
    }
  };
  add(tp, 1, 0.9);
  add(fp, 0, 0.8);
  add(fn, 1, 0.2);
  add(tn, 0, 0.1);
}

TEST(Metrics, HandConfusionMatrix) {
  std::vector<int> y;
  std::vector<double> s;
  confusion(40, 10, 20, 30, y, s);
  const auto m = compute_metrics(y, s);
  EXPECT_EQ(m.tp, 40);
  EXPECT_EQ(m.tn, 30);
  EXPECT_NEAR(m[Metric::Precision], 0.8, 1e-9);
  EXPECT_NEAR(m[Metric::Recall], 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(m[Metric::Specificity], 0.75, 1e-9);
  EXPECT_NEAR(m[Metric::Gmean], std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(m[Metric::Kappa], 0.4, 1e-9);
  EXPECT_NEAR(m[Metric::F1], 2 * 0.8 * (2.0 / 3.0) / (0.8 + 2.0 / 3.0), 1e-9);
  EXPECT_TRUE(m.undefined.empty());
}

TEST(Metrics, PerfectClassifier) {
  std::vector<int> y;
  std::vector<double> s;
  confusion(7, 0, 0, 5, y, s);
  const auto m = compute_metrics(y, s);
  for (const auto metric : kAllMetrics) EXPECT_DOUBLE_EQ(m[metric], 1.0) << to_string(metric);
}

TEST(Metrics, UndefinedSpecificityHasReason) {
  std::vector<int> y;
  std::vector<double> s;
  confusion(5, 0, 0, 0, y, s);
  const auto m = compute_metrics(y, s);
  EXPECT_TRUE(std::isnan(m[Metric::Specificity]));
  EXPECT_FALSE(m.undefined.at(Metric::Specificity).empty());
  EXPECT_THROW(compute_metrics(std::vector<int>{1}, std::vector<double>{}), InvalidArgument);
}

TEST(Metrics, GmeanIdentityOnRandomMatrices) {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    std::vector<int> y;
    std::vector<double> s;
    confusion(1 + rng.below(50), rng.below(50), rng.below(50), 1 + rng.below(50), y, s);
    const auto m = compute_metrics(y, s);
    const double g = m[Metric::Gmean];
    EXPECT_NEAR(g * g, m[Metric::Recall] * m[Metric::Specificity], 1e-12);
  }
}

double brute_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        den += 1;
        num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  return num / den;
}

TEST(Auc, Conventions) {
  EXPECT_DOUBLE_EQ(compute_auc(std::vector<int>{0, 0, 1, 1}, std::vector<double>{0.1, 0.2, 0.3, 0.4}), 1.0);
  EXPECT_DOUBLE_EQ(compute_auc(std::vector<int>{0, 1, 0, 1}, std::vector<double>{0.5, 0.5, 0.5, 0.5}), 0.5);
  EXPECT_TRUE(std::isnan(compute_auc(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2})));
  const std::vector<int> y = {1, 0, 1, 0, 0, 1};
  const std::vector<double> s = {0.9, 0.3, 0.3, 0.6, 0.1, 0.5};
  EXPECT_NEAR(compute_auc(y, s), brute_auc(y, s), 1e-12);
}

TEST(Auc, MatchesPairwiseOnRandomSets) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < 0.4;
      s[i] = std::round(rng.uniform() * 20) / 20;  // coarse, to force ties
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(compute_auc(y, s), brute_auc(y, s), 1e-9);
  }
}

TEST(Baseline, ExpectationsAndDeterminism) {
  Rng rng(8);
  std::vector<int> y(10000);
  for (auto& v : y) v = rng.uniform() < 0.3;
  const auto b = random_baseline(y, 3, 1);
  EXPECT_NEAR(b[Metric::Auc], 0.5, 0.05);
  EXPECT_NEAR(b[Metric::Recall], 0.5, 0.05);
  const auto again = random_baseline(y, 3, 1);
  EXPECT_EQ(b.values, again.values);
  const auto avg = random_baseline(std::vector<int>(y.begin(), y.begin() + 200), 4, 200);
  EXPECT_NEAR(avg[Metric::Kappa], 0.0, 0.02);
}

TEST(Gains, Arithmetic) {
  MetricSet model, base;
  model[Metric::Auc] = 0.75;
  base[Metric::Auc] = 0.5;
  model[Metric::Recall] = 0.6;
  base[Metric::Recall] = 0.6;
  model[Metric::Precision] = 0.4;
  base[Metric::Precision] = 0.0;
  model[Metric::Kappa] = 0.3;
  base[Metric::Kappa] = 0.01;
  const auto g = gain_vs_random(model, base);
  EXPECT_NEAR(g[Metric::Auc], 50.0, 1e-12);
  EXPECT_NEAR(g[Metric::Recall], 0.0, 1e-12);
  EXPECT_TRUE(std::isnan(g[Metric::Precision]));
  EXPECT_EQ(g.undefined.at(Metric::Precision), "zero baseline");
  EXPECT_NEAR(g[Metric::Kappa], 29.0, 1e-12);
}

// Small matrix with one informative numeric column plus noise.
FeatureMatrix toy_matrix(ProximityPoint point, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  FeatureMatrix m;
  m.point = point;
  m.columns = {"num_commits", "jit-la-SUM", "priority"};
  const char* pri[] = {"Minor", "Major", "Critical"};
  for (std::size_t i = 0; i < n; ++i) {
    const bool label = rng.uniform() < 0.4;
    FeatureVector v;
    v.ticket_id = "T" + std::to_string(1000 + i);
    v.point = point;
    v.label = label;
    v.values = {static_cast<double>(rng.below(4)), (label ? 1.5 : 0.0) + rng.normal(), std::string(pri[rng.below(3)])};
    m.rows.push_back(std::move(v));
  }
  return m;
}

GridOptions small_options() {
  GridOptions o;
  o.project = "TOY";
  o.windows = {100, 20, 0.8};
  o.learner.forest.trees = 10;
  o.learner.network.hidden = 8;
  o.learner.network.epochs = 15;
  o.baseline_trials = 20;
  o.threads = 2;
  return o;
}

TEST(Grid, SingleCellSingleRow) {
  const std::vector<FeatureMatrix> data = {toy_matrix(ProximityPoint::Closed, 100, 1)};
  auto o = small_options();
  o.classifiers = {LearnerKind::LR};
  o.balancing = {Balancing::None};
  o.selection = {Selection::None};
  const auto grid = run_experiment_grid(data, o);
  ASSERT_EQ(grid.rows.size(), 1u);
  EXPECT_TRUE(grid.rows[0].error.empty());
  EXPECT_EQ(grid.baselines.size(), 1u);
}

TEST(Grid, FullGridRowCount) {
  std::vector<FeatureMatrix> data;
  for (const auto p : kAllPoints) data.push_back(toy_matrix(p, 140, 10 + static_cast<int>(p)));
  const auto grid = run_experiment_grid(data, small_options());
  EXPECT_EQ(grid.rows.size(), 3u * 3u * 4u * 3u);
  EXPECT_EQ(grid.baselines.size(), 9u);
  for (const auto& r : grid.rows) EXPECT_TRUE(r.error.empty()) << r.error;

  // Gains: per setup and classifier plus the "all" average.
  const auto gains = summarize_gains(grid);
  EXPECT_EQ(gains.size(), 3u * 4u * 4u * 7u);

  // CSV round trip keeps every cell and baseline.
  const auto dir = testing::temp_dir("grid_rt");
  {
    std::ofstream out(dir / "results.csv");
    write_results_csv(out, grid);
    std::ofstream g(dir / "gains.csv");
    write_gains_csv(g, gains);
  }
  const auto back = read_results_csv(dir / "results.csv");
  ASSERT_EQ(back.rows.size(), grid.rows.size());
  ASSERT_EQ(back.baselines.size(), grid.baselines.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i)
    for (const auto m : kAllMetrics) {
      const double a = grid.rows[i].metrics[m], b = back.rows[i].metrics[m];
      if (std::isnan(a)) {
        EXPECT_TRUE(std::isnan(b));
      } else {
        EXPECT_EQ(a, b);
      }
    }
  EXPECT_EQ(read_gains_csv(dir / "gains.csv").size(), gains.size());
}

TEST(Grid, SmoteLeavesTestRowsAlone) {
  const auto m = toy_matrix(ProximityPoint::Closed, 120, 3);
  const auto data = encode(m, Encoding::OneHot);
  const auto plan = plan_windows(m.rows.size(), {100, 20, 0.8});
  auto o = small_options();
  SetupConfig plain{Balancing::None, Selection::None, LearnerKind::LR, ProximityPoint::Closed, 1};
  SetupConfig smote = plain;
  smote.balancing = Balancing::Smote;
  const auto& w = plan.windows.back();
  const auto a = evaluate_cell(data, w, plain, o);
  const auto b = evaluate_cell(data, w, smote, o);
  EXPECT_EQ(a.tp + a.fp + a.fn + a.tn, static_cast<double>(w.test_size()));
  EXPECT_EQ(b.tp + b.fp + b.fn + b.tn, static_cast<double>(w.test_size()));
  // Positives in the test range are a property of the rows alone.
  EXPECT_EQ(a.tp + a.fn, b.tp + b.fn);
}

TEST(Grid, DeterministicUnderThreads) {
  std::vector<FeatureMatrix> data = {toy_matrix(ProximityPoint::Open, 120, 4)};
  auto o = small_options();
  o.threads = 1;
  const auto one = run_experiment_grid(data, o);
  o.threads = 3;
  const auto three = run_experiment_grid(data, o);
  std::ostringstream a, b;
  write_results_csv(a, one);
  write_results_csv(b, three);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Names, RoundTrip) {
  for (const auto m : kAllMetrics) EXPECT_EQ(parse_metric(to_string(m)), m);
  EXPECT_EQ(parse_balancing("smote"), Balancing::Smote);
  EXPECT_EQ(parse_selection("filter"), Selection::Filter);
  EXPECT_THROW(parse_balancing("adasyn"), InvalidArgument);
  EXPECT_TRUE(std::isnan(nan_mean(std::vector<double>{kNaN})));
  EXPECT_DOUBLE_EQ(nan_mean(std::vector<double>{1, kNaN, 3}), 2.0);
}

}  // namespace
}  // namespace tlp
