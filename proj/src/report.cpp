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

#include "tlp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tlp/csv.hpp"

namespace tlp {
namespace {

std::string fixed(double v, int digits = 3) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pvalue(double p) {
  if (std::isnan(p)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, p < 1e-3 ? "%.2e" : "%.4f", p);
  return buf;
}

std::string setup_name(Balancing b, Selection s) {
  return std::string(to_string(b)) + "/" + std::string(to_string(s));
}

std::vector<ProximityPoint> points_of(const GridResult& g) {
  std::set<ProximityPoint> s;
  for (const auto& r : g.rows) s.insert(r.point);
  return {s.begin(), s.end()};
}

void md_row(std::ostream& out, const std::vector<std::string>& cells) {
  out << '|';
  for (const auto& c : cells) out << ' ' << c << " |";
  out << '\n';
}

void md_header(std::ostream& out, const std::vector<std::string>& cells) {
  md_row(out, cells);
  out << '|';
  for (std::size_t i = 0; i < cells.size(); ++i) out << "---|";
  out << '\n';
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void put(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
    if (!f) throw DataError("write failed for " + path.string());
    f.close();
    names_.push_back(name);
  }

  std::vector<ReportFile> manifest() const {
    std::vector<ReportFile> out;
    for (const auto& n : names_) out.push_back({n, std::filesystem::file_size(dir_ / n), file_fnv1a(dir_ / n)});
    return out;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

}  // namespace

std::vector<std::string> report_file_names(bool with_power) {
  std::vector<std::string> names = {"summary.md", "gains.csv", "friedman.csv", "accuracy_distribution.csv"};
  if (with_power)
    for (const char* n : {"top10.csv", "bottom10.csv", "igr_distribution.csv", "power_tests.csv"}) names.push_back(n);
  names.push_back("manifest.json");
  return names;
}

std::uint64_t file_fnv1a(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a(bytes);
}

std::vector<ReportFile> emit_report(const GridResult& results, std::span<const IgrRecord> power,
                                    const std::filesystem::path& out_dir) {
  if (results.rows.empty()) throw InvalidArgument("report needs at least one evaluation result");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw DataError("cannot create output directory " + out_dir.string());
  Writer w(out_dir);
  const auto points = points_of(results);
  const auto gains = summarize_gains(results);

  std::ostringstream md;
  md << "# Ticket-level prediction report\n\n";
  md << "Project: " << (results.rows.front().project.empty() ? "(all)" : results.rows.front().project) << "\n\n";

  // Mean model accuracy per point and setup, across classifiers and windows.
  md << "## Accuracy\n\nMean over classifiers and windows.\n\n";
  {
    std::vector<std::string> hdr = {"setup", "metric"};
    for (const auto p : points) hdr.emplace_back(to_string(p));
    md_header(md, hdr);
    std::map<std::tuple<Balancing, Selection, Metric, ProximityPoint>, std::vector<double>> acc;
    for (const auto& r : results.rows)
      for (const auto m : kAllMetrics) acc[{r.balancing, r.selection, m, r.point}].push_back(r.metrics[m]);
    std::set<std::pair<Balancing, Selection>> setups;
    for (const auto& r : results.rows) setups.insert({r.balancing, r.selection});
    for (const auto& [b, s] : setups)
      for (const auto m : kAllMetrics) {
        std::vector<std::string> row = {setup_name(b, s), std::string(to_string(m))};
        for (const auto p : points) row.push_back(fixed(nan_mean(acc[{b, s, m, p}])));
        md_row(md, row);
      }
    md << '\n';
  }

  // Gains: setup x metric rows, one column per point (classifier average).
  {
    std::ostringstream csv_out;
    csv::Row hdr = {"balancing", "selection", "metric"};
    for (const auto p : points) hdr.push_back("gain_" + std::string(to_string(p)));
    csv::write_row(csv_out, hdr);
    md << "## Gain over random prediction (%)\n\nAverage across classifiers; kappa in percentage points.\n\n";
    std::vector<std::string> mhdr = {"setup", "metric"};
    for (const auto p : points) mhdr.emplace_back(to_string(p));
    md_header(md, mhdr);
    std::map<std::tuple<Balancing, Selection, Metric>, std::map<ProximityPoint, double>> table;
    for (const auto& g : gains)
      if (g.classifier == "all") table[{g.balancing, g.selection, g.metric}][g.point] = g.gain;
    for (const auto& [key, by_point] : table) {
      const auto& [b, s, m] = key;
      csv::Row row = {std::string(to_string(b)), std::string(to_string(s)), std::string(to_string(m))};
      std::vector<std::string> mrow = {setup_name(b, s), std::string(to_string(m))};
      for (const auto p : points) {
        const auto it = by_point.find(p);
        const double v = it == by_point.end() ? kNaN : it->second;
        row.push_back(format_double(v));
        mrow.push_back(fixed(v, 1));
      }
      csv::write_row(csv_out, row);
      md_row(md, mrow);
    }
    md << '\n';
    w.put("gains.csv", csv_out.str());
  }

  // Friedman over proximity points.
  {
    const auto tests = rq1_friedman(results);
    std::ostringstream csv_out;
    csv::write_row(csv_out, {"balancing", "selection", "metric", "blocks", "chi_square", "df", "p_value",
                             "kendalls_w", "error"});
    md << "## Friedman test across proximity points\n\nBlocks are (classifier, window) pairs.\n\n";
    md_header(md, {"setup", "metric", "blocks", "chi-square", "p-value", "Kendall's W"});
    for (const auto& t : tests) {
      csv::write_row(csv_out, {std::string(to_string(t.balancing)), std::string(to_string(t.selection)),
                               std::string(to_string(t.metric)), std::to_string(t.result.blocks),
                               format_double(t.result.chi_square), format_double(t.result.df),
                               format_double(t.result.p_value), format_double(t.result.kendalls_w), t.error});
      md_row(md, {setup_name(t.balancing, t.selection), std::string(to_string(t.metric)),
                  std::to_string(t.result.blocks), fixed(t.result.chi_square), pvalue(t.result.p_value),
                  fixed(t.result.kendalls_w)});
    }
    md << '\n';
    w.put("friedman.csv", csv_out.str());
  }

  // Per-window accuracy for box plots; baselines included as "random".
  {
    std::ostringstream csv_out;
    csv::Row hdr = {"proximity", "classifier", "balancing", "selection", "window"};
    for (const auto m : kAllMetrics) hdr.emplace_back(to_string(m));
    csv::write_row(csv_out, hdr);
    for (const auto& r : results.rows) {
      csv::Row row = {std::string(to_string(r.point)), std::string(to_string(r.classifier)),
                      std::string(to_string(r.balancing)), std::string(to_string(r.selection)),
                      std::to_string(r.window)};
      for (const auto m : kAllMetrics) row.push_back(format_double(r.metrics[m]));
      csv::write_row(csv_out, row);
    }
    for (const auto& b : results.baselines) {
      csv::Row row = {std::string(to_string(b.point)), "random", "none", "none", std::to_string(b.window)};
      for (const auto m : kAllMetrics) row.push_back(format_double(b.metrics[m]));
      csv::write_row(csv_out, row);
    }
    w.put("accuracy_distribution.csv", csv_out.str());
  }

  const bool with_power = !power.empty();
  if (!with_power) {
    md << "## Feature power\n\nAbsent: no power records were supplied.\n";
  } else {
    std::set<ProximityPoint> ppoints;
    for (const auto& r : power) ppoints.insert(r.point);
    md << "## Feature power\n\n";
    std::ostringstream top, bottom;
    csv::write_row(top, {"proximity", "rank", "feature", "family", "mean_igr"});
    csv::write_row(bottom, {"proximity", "rank", "feature", "family", "mean_igr"});
    for (const auto p : ppoints) {
      const auto ranking = rank_by_mean(power, p);
      const auto t = ranking.top(10), b = ranking.bottom(10);
      for (const auto& f : t)
        csv::write_row(top, {std::string(to_string(p)), std::to_string(f.rank), f.feature,
                             std::string(family_tag(f.family)), format_double(f.igr)});
      for (const auto& f : b)
        csv::write_row(bottom, {std::string(to_string(p)), std::to_string(f.rank), f.feature,
                                std::string(family_tag(f.family)), format_double(f.igr)});
      md << "### Top 10 at " << to_string(p) << "\n\n";
      md_header(md, {"rank", "feature", "family", "mean IGR"});
      for (const auto& f : t)
        md_row(md, {std::to_string(f.rank), f.feature, std::string(family_tag(f.family)), fixed(f.igr, 4)});
      md << "\n### Bottom 10 at " << to_string(p) << "\n\n";
      md_header(md, {"rank", "feature", "family", "mean IGR"});
      for (const auto& f : b)
        md_row(md, {std::to_string(f.rank), f.feature, std::string(family_tag(f.family)), fixed(f.igr, 4)});
      md << '\n';
    }
    w.put("top10.csv", top.str());
    w.put("bottom10.csv", bottom.str());

    std::ostringstream dist;
    write_family_csv(dist, family_aggregate(power));
    w.put("igr_distribution.csv", dist.str());

    std::ostringstream tests;
    csv::write_row(tests, {"factor", "blocks", "treatments", "chi_square", "df", "p_value", "kendalls_w", "error"});
    md << "### Family x proximity analysis of mean IGR\n\n";
    try {
      const auto tw = two_way_power_analysis(power);
      md_header(md, {"factor", "blocks", "chi-square", "p-value", "Kendall's W"});
      for (const auto& [name, r] : {std::pair<const char*, const FriedmanResult&>{"family", tw.family},
                                    {"proximity", tw.point},
                                    {"interaction", tw.interaction}}) {
        csv::write_row(tests, {name, std::to_string(r.blocks), std::to_string(r.treatments), format_double(r.chi_square),
                               format_double(r.df), format_double(r.p_value), format_double(r.kendalls_w), ""});
        md_row(md, {name, std::to_string(r.blocks), fixed(r.chi_square), pvalue(r.p_value), fixed(r.kendalls_w)});
      }
    } catch (const InvalidArgument& e) {
      csv::write_row(tests, {"all", "0", "0", "nan", "nan", "nan", "nan", e.what()});
      md << "Not computed: " << e.what() << '\n';
    }
    md << '\n';
    w.put("power_tests.csv", tests.str());
  }

  // summary.md goes first in the manifest; write it after the tables.
  Writer summary(out_dir);
  summary.put("summary.md", md.str());
  auto files = summary.manifest();
  for (auto& f : w.manifest()) files.push_back(std::move(f));

  nlohmann::json m = nlohmann::json::array();
  for (const auto& f : files) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(f.fnv1a));
    m.push_back({{"name", f.name}, {"bytes", f.bytes}, {"fnv1a", hex}});
  }
  std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
  if (!mf) throw DataError("cannot write " + (out_dir / "manifest.json").string());
  mf << nlohmann::json{{"files", m}}.dump(2) << '\n';
  mf.close();
  files.push_back({"manifest.json", std::filesystem::file_size(out_dir / "manifest.json"),
                   file_fnv1a(out_dir / "manifest.json")});
  return files;
}

}  // namespace tlp
