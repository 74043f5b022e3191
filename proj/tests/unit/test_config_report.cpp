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

#include <cstdlib>
#include <iomanip>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "tlp/config.hpp"
#include "tlp/csv.hpp"
#include "tlp/report.hpp"

namespace tlp {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.project = "HIVE";
  c.points = {ProximityPoint::Closed};
  c.classifiers = {LearnerKind::LR};
  c.windows.step = 50;
  c.clear_repository["HIVE"] = true;
  c.availability_overrides["priority"] = Stage::Assigned;
  c.seed = 99;
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
  EXPECT_EQ(config_from_json(config_to_json(RunConfig{})), RunConfig{});
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  EXPECT_THROW(config_from_json(R"({"seeed": 3})"), DataError);
  EXPECT_THROW(config_from_json(R"({"windows": {"initial": 1000, "stride": 5}})"), DataError);
  EXPECT_THROW(config_from_json(R"({"points": ["later"]})"), DataError);
  EXPECT_THROW(config_from_json(R"({"seed": "x"})"), DataError);
  EXPECT_THROW(config_from_json(R"({"igr_bins": 1})"), DataError);
  EXPECT_THROW(config_from_json("not json"), DataError);
  EXPECT_EQ(config_from_json(R"({"seed": 3})").seed, 3u);
}

TEST(Config, EnvironmentVariableNamesDefault) {
  const auto dir = testing::temp_dir("config_env");
  std::ofstream(dir / "c.json") << R"({"seed": 42, "project": "ENV"})";
  ::setenv(kConfigEnv, (dir / "c.json").c_str(), 1);
  const auto c = default_config();
  ::unsetenv(kConfigEnv);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.project, "ENV");
  EXPECT_EQ(default_config(), RunConfig{});
}

TEST(Config, DerivedSettings) {
  RunConfig c;
  c.availability_overrides["priority"] = Stage::Closed;
  c.forest_trees = 7;
  c.nn_hidden = 5;
  c.clear_repository["A"] = false;
  EXPECT_EQ(make_registry(c).at("priority").availability, Stage::Closed);
  const auto g = make_grid_options(c);
  EXPECT_EQ(g.learner.forest.trees, 7);
  EXPECT_EQ(g.learner.network.hidden, 5);
  EXPECT_FALSE(make_filter_config(c).clear_repository.at("A"));
}

TEST(Config, ManifestClarityYieldsToExplicitEntries) {
  const auto dir = testing::temp_dir("config_manifest");
  std::ofstream(dir / "manifest.json") << R"({"clear_repository": {"A": true, "B": false}})";
  RunConfig c;
  c.manifest = dir / "manifest.json";
  c.clear_repository["B"] = true;
  const auto f = make_filter_config(c);
  EXPECT_TRUE(f.clear_repository.at("A"));
  EXPECT_TRUE(f.clear_repository.at("B"));
}

GridResult small_grid(std::size_t windows) {
  GridResult g;
  for (const auto p : kAllPoints)
    for (const auto k : {LearnerKind::RF, LearnerKind::LR})
      for (std::size_t w = 0; w < windows; ++w) {
        ResultRow r;
        r.project = "P";
        r.point = p;
        r.classifier = k;
        r.window = w;
        for (const auto m : kAllMetrics) r.metrics[m] = 0.5 + 0.1 * static_cast<double>(p) + 0.01 * w;
        g.rows.push_back(r);
      }
  for (const auto p : kAllPoints)
    for (std::size_t w = 0; w < windows; ++w) {
      BaselineRow b;
      b.point = p;
      b.window = w;
      for (const auto m : kAllMetrics) b.metrics[m] = 0.5;
      b.metrics[Metric::Kappa] = 0.0;
      g.baselines.push_back(b);
    }
  return g;
}

std::vector<IgrRecord> small_power() {
  std::vector<IgrRecord> recs;
  const auto& reg = default_registry();
  for (std::size_t w = 0; w < 3; ++w)
    for (const auto p : kAllPoints)
      for (std::size_t i = 0; i < reg.size(); ++i) {
        const bool avail = is_available(reg[i].code_name, p);
        recs.push_back({w, p, reg[i].code_name, reg[i].family,
                        avail ? 0.001 * static_cast<double>((i * 7 + w) % 13) : 0.0, avail});
      }
  return recs;
}

TEST(Report, EvaluationOnlyMarksPowerAbsent) {
  const auto dir = testing::temp_dir("report_eval_only");
  const auto files = emit_report(small_grid(1), {}, dir);
  const auto names = report_file_names(false);
  ASSERT_EQ(files.size(), names.size());
  for (std::size_t i = 0; i < files.size(); ++i) EXPECT_EQ(files[i].name, names[i]);
  EXPECT_FALSE(std::filesystem::exists(dir / "top10.csv"));
  const auto md = slurp(dir / "summary.md");
  EXPECT_NE(md.find("Absent"), std::string::npos);
  // Single-window run: one distribution row per cell plus one per baseline.
  const auto table = csv::read_file(dir / "accuracy_distribution.csv");
  EXPECT_EQ(table.rows.size(), 3u * 2u + 3u);
}

TEST(Report, ManifestListsNonEmptyFilesWithHashes) {
  const auto dir = testing::temp_dir("report_full");
  emit_report(small_grid(3), small_power(), dir);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  std::vector<std::string> listed;
  for (const auto& f : manifest["files"]) {
    const std::string name = f["name"];
    listed.push_back(name);
    EXPECT_GT(f["bytes"].get<std::uintmax_t>(), 0u) << name;
    EXPECT_EQ(f["bytes"].get<std::uintmax_t>(), std::filesystem::file_size(dir / name));
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << file_fnv1a(dir / name);
    EXPECT_EQ(f["fnv1a"].get<std::string>(), hex.str()) << name;
  }
  auto expected = report_file_names(true);
  expected.pop_back();  // manifest.json itself
  EXPECT_EQ(listed, expected);
  const auto top = csv::read_file(dir / "top10.csv");
  EXPECT_EQ(top.rows.size(), 30u);
}

TEST(Report, ByteIdenticalReruns) {
  const auto a = testing::temp_dir("report_a"), b = testing::temp_dir("report_b");
  emit_report(small_grid(3), small_power(), a);
  emit_report(small_grid(3), small_power(), b);
  for (const auto& name : report_file_names(true)) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST(Report, Errors) {
  EXPECT_THROW(emit_report(GridResult{}, {}, testing::temp_dir("report_empty")), InvalidArgument);
  const auto dir = testing::temp_dir("report_blocked");
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(emit_report(small_grid(1), {}, dir / "file" / "sub"), DataError);
}

}  // namespace
}  // namespace tlp
