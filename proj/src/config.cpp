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

#include "tlp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tlp/synth.hpp"

namespace tlp {
namespace {

using nlohmann::json;

template <class T, class F>
json names(const std::vector<T>& values, F to_name) {
  json a = json::array();
  for (const auto& v : values) a.push_back(std::string(to_name(v)));
  return a;
}

template <class T, class P>
std::vector<T> parse_names(const json& a, P parse) {
  std::vector<T> out;
  for (const auto& v : a) out.push_back(parse(v.template get<std::string>()));
  return out;
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json overrides = json::object();
  for (const auto& [k, v] : c.availability_overrides) overrides[k] = std::string(to_string(v));
  json clarity = json::object();
  for (const auto& [k, v] : c.clear_repository) clarity[k] = v;
  json j = {
      {"tickets", c.tickets.string()},
      {"commits", c.commits.string()},
      {"repo_metrics", c.repo_metrics.string()},
      {"lexicons", c.lexicons.string()},
      {"out_dir", c.out_dir.string()},
      {"project", c.project},
      {"filters", names(c.filters, [](Filter f) { return to_string(f); })},
      {"clear_repository", clarity},
      {"manifest", c.manifest.string()},
      {"opening_date_literal_polarity", c.opening_date_literal_polarity},
      {"snoring_fraction", c.snoring_fraction},
      {"points", names(c.points, [](ProximityPoint p) { return to_string(p); })},
      {"temporal_window_days", c.temporal_window_days},
      {"availability_overrides", overrides},
      {"classifiers", names(c.classifiers, [](LearnerKind k) { return to_string(k); })},
      {"balancing", names(c.balancing, [](Balancing b) { return to_string(b); })},
      {"selection", names(c.selection, [](Selection s) { return to_string(s); })},
      {"windows", {{"initial", c.windows.initial}, {"step", c.windows.step}, {"train_fraction", c.windows.train_fraction}}},
      {"seed", c.seed},
      {"smote_k", c.smote_k},
      {"baseline_trials", c.baseline_trials},
      {"forest_trees", c.forest_trees},
      {"nn_hidden", c.nn_hidden},
      {"nn_epochs", c.nn_epochs},
      {"igr_bins", c.igr_bins},
      {"threads", c.threads},
  };
  return j.dump(2) + "\n";
}

RunConfig config_from_json(std::string_view text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw DataError("config must be a JSON object");
    static const std::set<std::string> known = {
        "tickets",     "commits",     "repo_metrics", "lexicons",          "out_dir",    "project",
        "filters",     "clear_repository",            "manifest",          "opening_date_literal_polarity",
        "snoring_fraction",           "points",       "temporal_window_days", "availability_overrides",
        "classifiers", "balancing",   "selection",    "windows",           "seed",       "smote_k",
        "baseline_trials",            "forest_trees", "nn_hidden",         "nn_epochs",  "igr_bins",
        "threads"};
    for (const auto& [k, v] : j.items())
      if (!known.count(k)) throw DataError("unknown config key '" + k + "'");
    auto path = [&](const char* k, std::filesystem::path& dst) {
      if (j.contains(k)) dst = j.at(k).get<std::string>();
    };
    path("tickets", c.tickets);
    path("commits", c.commits);
    path("repo_metrics", c.repo_metrics);
    path("lexicons", c.lexicons);
    path("out_dir", c.out_dir);
    path("manifest", c.manifest);
    if (j.contains("project")) c.project = j.at("project").get<std::string>();
    if (j.contains("filters")) c.filters = parse_names<Filter>(j.at("filters"), parse_filter);
    if (j.contains("clear_repository")) {
      c.clear_repository.clear();
      for (const auto& [k, v] : j.at("clear_repository").items()) c.clear_repository[k] = v.get<bool>();
    }
    if (j.contains("opening_date_literal_polarity"))
      c.opening_date_literal_polarity = j.at("opening_date_literal_polarity").get<bool>();
    if (j.contains("snoring_fraction")) c.snoring_fraction = j.at("snoring_fraction").get<double>();
    if (j.contains("points")) c.points = parse_names<ProximityPoint>(j.at("points"), parse_point);
    if (j.contains("temporal_window_days")) c.temporal_window_days = j.at("temporal_window_days").get<int>();
    if (j.contains("availability_overrides")) {
      c.availability_overrides.clear();
      for (const auto& [k, v] : j.at("availability_overrides").items())
        c.availability_overrides[k] = parse_stage(v.get<std::string>());
    }
    if (j.contains("classifiers")) c.classifiers = parse_names<LearnerKind>(j.at("classifiers"), parse_learner);
    if (j.contains("balancing")) c.balancing = parse_names<Balancing>(j.at("balancing"), parse_balancing);
    if (j.contains("selection")) c.selection = parse_names<Selection>(j.at("selection"), parse_selection);
    if (j.contains("windows")) {
      const auto& w = j.at("windows");
      for (const auto& [k, v] : w.items())
        if (k != "initial" && k != "step" && k != "train_fraction")
          throw DataError("unknown config key 'windows." + k + "'");
      if (w.contains("initial")) c.windows.initial = w.at("initial").get<std::size_t>();
      if (w.contains("step")) c.windows.step = w.at("step").get<std::size_t>();
      if (w.contains("train_fraction")) c.windows.train_fraction = w.at("train_fraction").get<double>();
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("smote_k")) c.smote_k = j.at("smote_k").get<int>();
    if (j.contains("baseline_trials")) c.baseline_trials = j.at("baseline_trials").get<int>();
    if (j.contains("forest_trees")) c.forest_trees = j.at("forest_trees").get<int>();
    if (j.contains("nn_hidden")) c.nn_hidden = j.at("nn_hidden").get<int>();
    if (j.contains("nn_epochs")) c.nn_epochs = j.at("nn_epochs").get<int>();
    if (j.contains("igr_bins")) c.igr_bins = j.at("igr_bins").get<int>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid config: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json(ss.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

RunConfig default_config() {
  const char* env = std::getenv(kConfigEnv);
  if (env == nullptr || *env == '\0') return {};
  return load_config(env);
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw DataError("invalid config: " + what); };
  if (c.points.empty()) fail("points must not be empty");
  if (c.classifiers.empty() || c.balancing.empty() || c.selection.empty()) fail("grid axes must not be empty");
  if (!(c.snoring_fraction >= 0 && c.snoring_fraction < 1)) fail("snoring_fraction must lie in [0, 1)");
  if (c.temporal_window_days <= 0) fail("temporal_window_days must be positive");
  if (c.windows.initial < 2 || c.windows.step < 1) fail("window sizes must be positive");
  if (!(c.windows.train_fraction > 0 && c.windows.train_fraction < 1)) fail("train_fraction must lie in (0, 1)");
  if (c.smote_k < 1) fail("smote_k must be >= 1");
  if (c.baseline_trials < 1) fail("baseline_trials must be >= 1");
  if (c.forest_trees < 1 || c.nn_hidden < 1 || c.nn_epochs < 1) fail("learner sizes must be >= 1");
  if (c.igr_bins < 2) fail("igr_bins must be >= 2");
  for (const auto& [name, stage] : c.availability_overrides)
    if (!default_registry().find(name)) fail("availability override for unknown feature '" + name + "'");
}

FeatureRegistry make_registry(const RunConfig& c) {
  return default_registry().with_availability(c.availability_overrides);
}

FilterConfig make_filter_config(const RunConfig& c) {
  FilterConfig f;
  if (!c.manifest.empty()) f.clear_repository = read_manifest_clarity(c.manifest);
  for (const auto& [k, v] : c.clear_repository) f.clear_repository[k] = v;  // explicit entries win
  f.opening_date_literal_polarity = c.opening_date_literal_polarity;
  f.snoring_fraction = c.snoring_fraction;
  return f;
}

GridOptions make_grid_options(const RunConfig& c) {
  GridOptions o;
  o.project = c.project;
  o.classifiers = c.classifiers;
  o.balancing = c.balancing;
  o.selection = c.selection;
  o.windows = c.windows;
  o.learner.forest.trees = c.forest_trees;
  o.learner.network.hidden = c.nn_hidden;
  o.learner.network.epochs = c.nn_epochs;
  o.seed = c.seed;
  o.smote_k = c.smote_k;
  o.baseline_trials = c.baseline_trials;
  o.threads = c.threads;
  return o;
}

}  // namespace tlp
