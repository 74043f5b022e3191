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

#include "tlp/power.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tlp/csv.hpp"
#include "tlp/parallel.hpp"
#include "tlp/stats.hpp"

namespace tlp {

double information_gain_ratio(std::span<const int> codes, std::span<const int> y) {
  if (codes.size() != y.size()) throw InvalidArgument("feature column and labels differ in length");
  return stats::gain_ratio(codes, y);
}

std::vector<int> discretize(std::span<const FeatureValue> column, ValueKind kind, int bins) {
  bool textual = kind == ValueKind::Categorical;
  for (const auto& v : column) textual = textual || std::holds_alternative<std::string>(v);
  if (textual) {
    std::set<std::string> levels;
    for (const auto& v : column)
      if (const auto* s = std::get_if<std::string>(&v)) levels.insert(*s);
    if (std::any_of(column.begin(), column.end(), [](const FeatureValue& v) { return std::holds_alternative<double>(v); }))
      for (const auto& v : column)
        if (const auto* d = std::get_if<double>(&v)) levels.insert(format_double(*d));
    const std::vector<std::string> sorted(levels.begin(), levels.end());
    std::vector<int> codes;
    for (const auto& v : column) {
      if (is_missing(v)) {
        codes.push_back(static_cast<int>(sorted.size()));
        continue;
      }
      const std::string key = std::holds_alternative<std::string>(v) ? std::get<std::string>(v)
                                                                     : format_double(std::get<double>(v));
      codes.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), key) - sorted.begin()));
    }
    return codes;
  }
  std::vector<std::optional<double>> values;
  values.reserve(column.size());
  for (const auto& v : column) {
    if (const auto* d = std::get_if<double>(&v)) values.emplace_back(*d);
    else values.emplace_back(std::nullopt);
  }
  return stats::equal_frequency_bins(std::span<const std::optional<double>>(values), bins);
}

double information_gain_ratio(std::span<const FeatureValue> column, std::span<const int> y, ValueKind kind,
                              int bins) {
  return information_gain_ratio(discretize(column, kind, bins), y);
}

std::vector<IgrRecord> compute_igr(const FeatureMatrix& matrix, const WindowParams& windows,
                                   const FeatureRegistry& registry, int bins, unsigned threads) {
  if (matrix.rows.empty()) return {};
  const auto plan = plan_windows(matrix.rows.size(), windows);
  const std::size_t f = matrix.columns.size();
  std::vector<IgrRecord> out(plan.windows.size() * f);
  std::vector<const FeatureInfo*> info(f);
  for (std::size_t c = 0; c < f; ++c) info[c] = &registry.at(matrix.columns[c]);
  parallel_for(out.size(), threads, [&](std::size_t i) {
    const auto& w = plan.windows[i / f];
    const std::size_t c = i % f;
    std::vector<FeatureValue> column;
    std::vector<int> y;
    for (std::size_t r = w.train_begin; r < w.test_end; ++r) {
      column.push_back(matrix.rows[r].values[c]);
      y.push_back(matrix.rows[r].label ? 1 : 0);
    }
    auto& rec = out[i];
    rec.window = w.index;
    rec.point = matrix.point;
    rec.feature = matrix.columns[c];
    rec.family = info[c]->family;
    rec.available = is_available(info[c]->availability, matrix.point);
    rec.igr = information_gain_ratio(column, y, info[c]->kind, bins);
  });
  return out;
}

std::vector<RankedFeature> Ranking::top(std::size_t k) const {
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size()))};
}

std::vector<RankedFeature> Ranking::bottom(std::size_t k) const {
  return {ranked.end() - static_cast<std::ptrdiff_t>(std::min(k, ranked.size())), ranked.end()};
}

namespace {

Ranking rank(std::vector<RankedFeature> items) {
  std::sort(items.begin(), items.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.igr != b.igr) return a.igr > b.igr;
    return a.feature < b.feature;
  });
  for (std::size_t i = 0; i < items.size(); ++i) items[i].rank = i + 1;
  return {std::move(items)};
}

}  // namespace

Ranking rank_features(std::span<const IgrRecord> records) {
  std::vector<RankedFeature> items;
  for (const auto& r : records)
    if (r.available) items.push_back({0, r.feature, r.family, r.igr});
  return rank(std::move(items));
}

Ranking rank_by_mean(std::span<const IgrRecord> records, ProximityPoint point) {
  std::map<std::string, std::pair<double, std::size_t>> sums;
  std::map<std::string, Family> families;
  for (const auto& r : records) {
    if (r.point != point || !r.available) continue;
    auto& s = sums[r.feature];
    s.first += r.igr;
    s.second += 1;
    families[r.feature] = r.family;
  }
  std::vector<RankedFeature> items;
  for (const auto& [name, s] : sums)
    items.push_back({0, name, families[name], s.first / static_cast<double>(s.second)});
  return rank(std::move(items));
}

std::vector<FamilyAggregate> family_aggregate(std::span<const IgrRecord> records, const FeatureRegistry& registry) {
  struct Acc {
    double sum = 0, max = 0;
    std::size_t n = 0;
  };
  std::map<std::tuple<std::size_t, ProximityPoint, Family>, Acc> groups;
  for (const auto& r : records) {
    const Family family = registry.at(r.feature).family;
    auto& a = groups[{r.window, r.point, family}];
    const double v = r.available ? r.igr : 0.0;
    a.sum += v;
    a.max = a.n == 0 ? v : std::max(a.max, v);
    a.n += 1;
  }
  std::vector<FamilyAggregate> out;
  for (const auto& [key, a] : groups)
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), a.sum / static_cast<double>(a.n), a.max});
  return out;
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks) {
  std::vector<const std::vector<double>*> complete;
  std::size_t k = 0;
  for (const auto& b : blocks) {
    if (k == 0) k = b.size();
    if (b.size() != k) throw InvalidArgument("Friedman blocks must all have the same number of treatments");
    if (std::any_of(b.begin(), b.end(), [](double v) { return std::isnan(v); })) continue;
    complete.push_back(&b);
  }
  if (k < 2) throw InvalidArgument("Friedman test needs at least 2 treatments");
  if (complete.size() < 2) throw InvalidArgument("Friedman test needs at least 2 complete blocks");
  const double n = static_cast<double>(complete.size()), kk = static_cast<double>(k);
  std::vector<double> rank_sums(k, 0.0);
  double tie_term = 0;  // sum over tie groups of t^3 - t
  for (const auto* b : complete) {
    const auto ranks = stats::average_ranks(*b);
    for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    std::vector<double> sorted = *b;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i;
      while (j < k && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }
  double ss = 0;
  for (const double r : rank_sums) {
    const double d = r / n - (kk + 1) / 2.0;
    ss += d * d;
  }
  FriedmanResult res;
  res.blocks = complete.size();
  res.treatments = k;
  res.df = kk - 1;
  // Tie-corrected statistic; a table tied within every block carries no
  // ranking information and scores 0.
  const double correction = 1.0 - tie_term / (n * kk * (kk * kk - 1));
  res.chi_square = correction > 1e-12 ? 12.0 * n / (kk * (kk + 1)) * ss / correction : 0.0;
  res.p_value = stats::chi_square_sf(res.chi_square, res.df);
  res.kendalls_w = std::clamp(res.chi_square / (n * (kk - 1)), 0.0, 1.0);
  return res;
}

TwoWayResult two_way_power_analysis(std::span<const IgrRecord> records, const FeatureRegistry& registry) {
  const auto aggregates = family_aggregate(records, registry);
  std::set<Family> families;
  std::set<ProximityPoint> points;
  std::map<std::size_t, std::set<ProximityPoint>> windows_at;
  std::map<std::tuple<std::size_t, Family, ProximityPoint>, double> cell;
  for (const auto& a : aggregates) {
    families.insert(a.family);
    points.insert(a.point);
    windows_at[a.window].insert(a.point);
    cell[{a.window, a.family, a.point}] = a.mean;
  }
  if (families.size() < 2 || points.size() < 2)
    throw InvalidArgument("two-way analysis needs at least 2 families and 2 proximity points");
  std::vector<std::size_t> windows;
  for (const auto& [w, ps] : windows_at)
    if (ps.size() == points.size()) windows.push_back(w);
  if (windows.size() < 2) throw InvalidArgument("two-way analysis needs at least 2 windows common to every point");

  auto value = [&](std::size_t w, Family f, ProximityPoint p) {
    const auto it = cell.find({w, f, p});
    return it == cell.end() ? kNaN : it->second;
  };
  TwoWayResult out;
  out.windows = windows.size();

  std::vector<std::vector<double>> by_family, by_point, aligned;
  for (const auto w : windows) {
    for (const auto p : points) {
      std::vector<double> row;
      for (const auto f : families) row.push_back(value(w, f, p));
      by_family.push_back(std::move(row));
    }
    for (const auto f : families) {
      std::vector<double> row;
      for (const auto p : points) row.push_back(value(w, f, p));
      by_point.push_back(std::move(row));
    }
    // Interaction-aligned values: Y - mean over points - mean over families + grand mean.
    std::map<Family, double> f_mean;
    std::map<ProximityPoint, double> p_mean;
    double grand = 0;
    for (const auto f : families)
      for (const auto p : points) {
        const double v = value(w, f, p);
        f_mean[f] += v / static_cast<double>(points.size());
        p_mean[p] += v / static_cast<double>(families.size());
        grand += v / static_cast<double>(families.size() * points.size());
      }
    std::vector<double> row;
    for (const auto f : families)
      for (const auto p : points) {
        const double a = value(w, f, p) - f_mean[f] - p_mean[p] + grand;
        // Round away floating-point noise so exact ties stay ties.
        row.push_back(std::round(a * 1e12) / 1e12);
      }
    aligned.push_back(std::move(row));
  }
  out.family = friedman_test(by_family);
  out.point = friedman_test(by_point);
  out.interaction = friedman_test(aligned);
  return out;
}

std::vector<Rq1Test> rq1_friedman(const GridResult& grid) {
  std::set<ProximityPoint> points;
  for (const auto& r : grid.rows) points.insert(r.point);
  std::vector<Rq1Test> out;
  std::set<std::pair<Balancing, Selection>> setups;
  for (const auto& r : grid.rows) setups.insert({r.balancing, r.selection});
  for (const auto& [b, s] : setups) {
    for (const auto metric : kAllMetrics) {
      std::map<std::pair<LearnerKind, std::size_t>, std::map<ProximityPoint, double>> blocks;
      for (const auto& r : grid.rows)
        if (r.balancing == b && r.selection == s) blocks[{r.classifier, r.window}][r.point] = r.metrics[metric];
      std::vector<std::vector<double>> rows;
      for (const auto& [key, values] : blocks) {
        if (values.size() != points.size()) continue;
        std::vector<double> row;
        for (const auto p : points) row.push_back(values.at(p));
        rows.push_back(std::move(row));
      }
      Rq1Test t{b, s, metric, {}, ""};
      try {
        t.result = friedman_test(rows);
      } catch (const InvalidArgument& e) {
        t.error = e.what();
        t.result.chi_square = t.result.p_value = t.result.kendalls_w = kNaN;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

void write_igr_csv(std::ostream& out, std::span<const IgrRecord> records) {
  csv::write_row(out, {"window", "proximity", "feature", "family", "igr"});
  for (const auto& r : records)
    csv::write_row(out, {std::to_string(r.window), std::string(to_string(r.point)), r.feature,
                         std::string(family_tag(r.family)), format_double(r.igr)});
}

void write_family_csv(std::ostream& out, std::span<const FamilyAggregate> aggregates) {
  csv::write_row(out, {"window", "proximity", "family", "mean_igr", "max_igr"});
  for (const auto& a : aggregates)
    csv::write_row(out, {std::to_string(a.window), std::string(to_string(a.point)), std::string(family_tag(a.family)),
                         format_double(a.mean), format_double(a.max)});
}

std::vector<IgrRecord> read_igr_csv(const std::filesystem::path& path, const FeatureRegistry& registry) {
  const auto table = csv::read_file(path);
  const auto cw = table.column("window"), cp = table.column("proximity"), cf = table.column("feature"),
             ci = table.column("igr");
  std::vector<IgrRecord> out;
  for (const auto& row : table.rows) {
    IgrRecord r;
    try {
      r.window = static_cast<std::size_t>(parse_int(row.at(cw)));
      r.point = parse_point(row.at(cp));
      r.feature = row.at(cf);
      r.igr = parse_double(row.at(ci));
    } catch (const std::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    const auto i = registry.find(r.feature);
    if (!i) throw DataError(path.string() + ": unknown feature '" + r.feature + "'");
    r.family = registry[*i].family;
    r.available = is_available(registry[*i].availability, r.point);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace tlp
