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
#include <sstream>

#include "tlp/common.hpp"
#include "tlp/csv.hpp"
#include "tlp/parallel.hpp"

namespace tlp {
namespace {

TEST(Timestamp, RoundTripsIsoText) {
  const auto t = parse_timestamp("2019-05-21T10:00:00Z");
  EXPECT_EQ(format_timestamp(t), "2019-05-21T10:00:00Z");
  EXPECT_EQ(format_timestamp(t - Seconds{1}), "2019-05-21T09:59:59Z");
}

TEST(Timestamp, RejectsGarbage) {
  EXPECT_THROW(parse_timestamp("yesterday"), DataError);
  EXPECT_THROW(parse_timestamp(""), DataError);
}

TEST(Numbers, FormatDoubleRoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 123456789.125}) {
    EXPECT_EQ(parse_double(format_double(v)), v) << format_double(v);
  }
  EXPECT_TRUE(std::isnan(parse_double(format_double(kNaN))));
}

TEST(Numbers, ParseRejectsTrailingJunk) {
  EXPECT_THROW(parse_double("1.5x"), DataError);
  EXPECT_THROW(parse_int("12a"), DataError);
  EXPECT_EQ(parse_int("-42"), -42);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Rng, DeterministicPerSeed) {
  Rng a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformAndBelowStayInRange) {
  Rng r(1);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(7), 7u);
    sum += u;
  }
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(Rng, PoissonMeanMatches) {
  Rng r(3);
  for (double mean : {0.8, 4.0, 50.0}) {
    double sum = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(r.poisson(mean));
    EXPECT_NEAR(sum / n, mean, 0.05 * mean + 0.02) << mean;
  }
}

TEST(Csv, QuotedFieldsSurviveRoundTrip) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "with \"quote\"", "multi\nline"});
  std::istringstream in(out.str());
  csv::Reader reader(in);
  const auto row = reader.next();
  ASSERT_TRUE(row);
  EXPECT_EQ(*row, (csv::Row{"plain", "with,comma", "with \"quote\"", "multi\nline"}));
  EXPECT_FALSE(reader.next());
}

TEST(Csv, SplitJoin) {
  EXPECT_EQ(csv::split("a;b;;c", ';'), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(csv::join({"x", "y"}, ';'), "x;y");
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<int> one(100), four(100);
  parallel_for(100, 1, [&](std::size_t i) { one[i] = static_cast<int>(i * i); });
  parallel_for(100, 4, [&](std::size_t i) { four[i] = static_cast<int>(i * i); });
  EXPECT_EQ(one, four);
}

TEST(Parallel, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw DataError("boom");
                            }),
               DataError);
}

}  // namespace
}  // namespace tlp
