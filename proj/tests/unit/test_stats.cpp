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

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <optional>

#include "tlp/common.hpp"
#include "tlp/stats.hpp"

namespace tlp::stats {
namespace {

TEST(Ranks, AverageTies) {
  const double v[] = {10, 20, 20, 5};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Bins, EqualFrequencySplitsEvenly) {
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(i);
  const auto codes = equal_frequency_bins(v, 10);
  std::map<int, int> counts;
  for (int c : codes) ++counts[c];
  EXPECT_EQ(counts.size(), 10u);
  for (const auto& [code, n] : counts) EXPECT_EQ(n, 10) << code;
  // Monotone in the value.
  for (std::size_t i = 1; i < codes.size(); ++i) EXPECT_LE(codes[i - 1], codes[i]);
}

TEST(Bins, TiesShareABinAndMissingIsItsOwn) {
  const std::vector<std::optional<double>> v = {1.0, 1.0, 1.0, 1.0, std::nullopt, 2.0};
  const auto codes = equal_frequency_bins(v, 3);
  EXPECT_EQ(codes[0], codes[3]);
  EXPECT_NE(codes[4], codes[0]);
  EXPECT_NE(codes[4], codes[5]);
}

// Brute-force entropy in bits by counting.
double brute_entropy(const std::vector<int>& x) {
  std::map<int, double> c;
  for (int v : x) c[v] += 1;
  double h = 0;
  for (const auto& [k, n] : c) {
    const double p = n / static_cast<double>(x.size());
    h -= p * std::log2(p);
  }
  return h;
}

TEST(Entropy, MatchesCounting) {
  const std::vector<int> x = {0, 0, 1, 1, 1, 2};
  EXPECT_NEAR(entropy(x), brute_entropy(x), 1e-12);
  const std::vector<int> fair = {0, 1};
  EXPECT_NEAR(entropy(fair), 1.0, 1e-12);
}

TEST(GainRatio, PerfectAndConstant) {
  const std::vector<int> y = {0, 1, 0, 1};
  EXPECT_NEAR(gain_ratio(y, y), 1.0, 1e-12);
  const std::vector<int> c = {3, 3, 3, 3};
  EXPECT_EQ(gain_ratio(c, y), 0.0);
  EXPECT_NEAR(symmetric_uncertainty(y, y), 1.0, 1e-12);
  EXPECT_NEAR(conditional_entropy(y, y), 0.0, 1e-12);
}

TEST(Gamma, MatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 10.0, 50.0})
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 40.0, 120.0})
      EXPECT_NEAR(regularized_gamma_q(a, x), boost::math::gamma_q(a, x), 1e-12) << a << ' ' << x;
}

TEST(ChiSquare, TailKnownValues) {
  EXPECT_NEAR(chi_square_sf(20.0, 2.0), 4.539992976248486e-05, 1e-15);
  EXPECT_NEAR(chi_square_sf(0.0, 3.0), 1.0, 1e-15);
  EXPECT_NEAR(chi_square_sf(3.84145882069412, 1.0), 0.05, 1e-9);
}

}  // namespace
}  // namespace tlp::stats
