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

// Feature predictive power: per-window information gain ratio, rankings,
// family aggregates and the Friedman / Kendall's W layer.

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tlp/eval.hpp"
#include "tlp/features.hpp"

namespace tlp {

/// IGR of a discretized column against binary labels; 0 when H(X) = 0.
double information_gain_ratio(std::span<const int> codes, std::span<const int> y);

/// Discretizes then scores: categorical values map to one code per level,
/// numeric values to equal-frequency bins; MISSING is a category of its own.
std::vector<int> discretize(std::span<const FeatureValue> column, ValueKind kind, int bins = 10);
double information_gain_ratio(std::span<const FeatureValue> column, std::span<const int> y, ValueKind kind,
                              int bins = 10);

struct IgrRecord {
  std::size_t window = 0;
  ProximityPoint point = ProximityPoint::Open;
  std::string feature;
  Family family = Family::Code;
  double igr = 0;
  bool available = true;  // measurable at this point per the registry
};

/// One record per (window, feature), over all rows of each window.
std::vector<IgrRecord> compute_igr(const FeatureMatrix& matrix, const WindowParams& windows = {},
                                   const FeatureRegistry& registry = default_registry(), int bins = 10,
                                   unsigned threads = 0);

struct RankedFeature {
  std::size_t rank = 0;  // 1-based
  std::string feature;
  Family family = Family::Code;
  double igr = 0;
};

struct Ranking {
  std::vector<RankedFeature> ranked;  // measurable features only

  std::vector<RankedFeature> top(std::size_t k) const;
  /// The k lowest-ranked measurable features, in rank order.
  std::vector<RankedFeature> bottom(std::size_t k) const;
};

/// Descending IGR, ties by code-name; unavailable features are excluded.
/// `records` should hold one entry per feature.
Ranking rank_features(std::span<const IgrRecord> records);
/// Ranking of the mean IGR across windows, for one proximity point.
Ranking rank_by_mean(std::span<const IgrRecord> records, ProximityPoint point);

struct FamilyAggregate {
  std::size_t window = 0;
  ProximityPoint point = ProximityPoint::Open;
  Family family = Family::Code;
  double mean = 0;
  double max = 0;
};

/// Grouped per (window, point, family), in that order. Throws
/// UnknownFeature for features outside the registry.
std::vector<FamilyAggregate> family_aggregate(std::span<const IgrRecord> records,
                                              const FeatureRegistry& registry = default_registry());

struct FriedmanResult {
  double chi_square = 0;
  double df = 0;
  double p_value = 1;
  double kendalls_w = 0;
  std::size_t blocks = 0;
  std::size_t treatments = 0;
};

/// Rows are blocks, columns treatments; average ranks with the usual tie
/// correction, W = chi2 / (n (k - 1)). Rows holding a NaN are dropped;
/// fewer than 2 complete blocks or treatments throws InvalidArgument.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks);

struct TwoWayResult {
  FriedmanResult family;       // treatments = families, blocks = window x point
  FriedmanResult point;        // treatments = points, blocks = window x family
  FriedmanResult interaction;  // treatments = family x point, blocks = window, aligned values
  std::size_t windows = 0;
};

/// Rank-based factorial analysis of family-mean IGR blocked by window
/// (windows present at every point only). Throws InvalidArgument when the
/// records span fewer than 2 families, 2 points or 2 common windows.
TwoWayResult two_way_power_analysis(std::span<const IgrRecord> records,
                                    const FeatureRegistry& registry = default_registry());

struct Rq1Test {
  Balancing balancing = Balancing::None;
  Selection selection = Selection::None;
  Metric metric = Metric::Auc;
  FriedmanResult result;
  std::string error;
};

/// Friedman over proximity points per setup and metric, blocks =
/// (classifier, window) for windows evaluated at every point.
std::vector<Rq1Test> rq1_friedman(const GridResult& grid);

/// CSV: window, proximity, feature, family, igr.
void write_igr_csv(std::ostream& out, std::span<const IgrRecord> records);
/// CSV: window, proximity, family, mean_igr, max_igr.
void write_family_csv(std::ostream& out, std::span<const FamilyAggregate> aggregates);
std::vector<IgrRecord> read_igr_csv(const std::filesystem::path& path, const FeatureRegistry& registry = default_registry());

}  // namespace tlp
