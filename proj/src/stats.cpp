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

#include "tlp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "tlp/common.hpp"

namespace tlp::stats {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

std::vector<int> equal_frequency_bins(std::span<const std::optional<double>> values, int bins) {
  if (bins < 1) throw InvalidArgument("bin count must be positive");
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i]) present.push_back(i);
  std::vector<int> codes(values.size(), bins);
  std::sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) { return *values[a] < *values[b]; });
  const std::size_t m = present.size();
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i + 1;
    while (j < m && *values[present[j]] == *values[present[i]]) ++j;
    const int code = static_cast<int>((i * static_cast<std::size_t>(bins)) / m);
    for (std::size_t k = i; k < j; ++k) codes[present[k]] = code;
    i = j;
  }
  return codes;
}

std::vector<int> equal_frequency_bins(std::span<const double> values, int bins) {
  std::vector<std::optional<double>> wrapped(values.begin(), values.end());
  return equal_frequency_bins(std::span<const std::optional<double>>(wrapped), bins);
}

namespace {

double entropy_of_counts(const std::map<int, std::size_t>& counts, std::size_t total) {
  double h = 0;
  for (const auto& [code, c] : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double entropy(std::span<const int> codes) {
  if (codes.empty()) return 0;
  std::map<int, std::size_t> counts;
  for (const int c : codes) ++counts[c];
  return entropy_of_counts(counts, codes.size());
}

double conditional_entropy(std::span<const int> y, std::span<const int> x) {
  if (x.size() != y.size()) throw InvalidArgument("conditional entropy needs equal-length columns");
  if (x.empty()) return 0;
  std::map<int, std::map<int, std::size_t>> joint;
  for (std::size_t i = 0; i < x.size(); ++i) ++joint[x[i]][y[i]];
  double h = 0;
  for (const auto& [xv, ys] : joint) {
    std::size_t nx = 0;
    for (const auto& [yv, c] : ys) nx += c;
    h += static_cast<double>(nx) / static_cast<double>(x.size()) * entropy_of_counts(ys, nx);
  }
  return h;
}

double gain_ratio(std::span<const int> x, std::span<const int> y) {
  const double hx = entropy(x);
  if (hx <= 0) return 0;
  const double ig = entropy(y) - conditional_entropy(y, x);
  return std::clamp(ig / hx, 0.0, 1.0);
}

double symmetric_uncertainty(std::span<const int> x, std::span<const int> y) {
  const double hx = entropy(x), hy = entropy(y);
  if (hx + hy <= 0) return 0;
  const double ig = hy - conditional_entropy(y, x);
  return std::clamp(2.0 * ig / (hx + hy), 0.0, 1.0);
}

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 10000;

// Lower regularized gamma by its power series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz's continued fraction; valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0)) throw InvalidArgument("gamma shape must be positive");
  if (x <= 0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double chi_square_sf(double statistic, double df) {
  if (std::isnan(statistic)) return kNaN;
  return regularized_gamma_q(df / 2.0, statistic / 2.0);
}

}  // namespace tlp::stats
