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

#include "tlp/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tlp/csv.hpp"
#include "tlp/text.hpp"

namespace tlp {
namespace {

std::filesystem::path stage_dir(const RunConfig& c, const char* stage) {
  const auto dir = c.out_dir / stage;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  return f;
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) throw DataError(std::string(what) + " not found: " + path.string());
}

std::vector<RawCommit> load_commits(const RunConfig& c) {
  require_file(c.tickets, "tickets file");
  require_file(c.commits, "commits file");
  return load_corpus(c.tickets, c.commits).commits;
}

std::vector<FeatureMatrix> load_matrices(const RunConfig& c, const FeatureRegistry& registry) {
  std::vector<FeatureMatrix> out;
  for (const auto p : c.points) {
    const auto path = features_path(c, p);
    require_file(path, "feature matrix (run featurize first)");
    out.push_back(read_feature_matrix(path, registry));
    out.back().point = p;
  }
  return out;
}

}  // namespace

std::filesystem::path features_path(const RunConfig& c, ProximityPoint point) {
  return c.out_dir / "features" / (std::string(to_string(point)) + ".csv");
}

StageSummary run_ingest(const RunConfig& c) {
  require_file(c.tickets, "tickets file");
  require_file(c.commits, "commits file");
  RunConfig cfg = c;
  if (cfg.manifest.empty()) {
    // A generator manifest sitting next to the tickets declares repository clarity.
    const auto sibling = c.tickets.parent_path() / "manifest.json";
    if (std::filesystem::is_regular_file(sibling)) cfg.manifest = sibling;
  } else {
    require_file(cfg.manifest, "manifest file");
  }
  auto corpus = load_corpus(c.tickets, c.commits);
  auto linked = link_commits(corpus.tickets, corpus.commits);
  auto labeled = label_tickets(std::move(linked.linked));
  auto outcome = apply_filters(std::move(labeled), c.filters, make_filter_config(cfg));
  if (!c.project.empty())
    std::erase_if(outcome.survivors, [&](const LinkedTicket& t) { return t.ticket.project != c.project; });

  const auto dir = stage_dir(c, "ingest");
  StageSummary s;
  {
    auto f = open_out(dir / "linked.jsonl");
    write_linked_jsonl(f, outcome.survivors);
  }
  {
    auto f = open_out(dir / "filter_audit.json");
    f << audit_to_json(outcome.audit);
  }
  {
    auto f = open_out(dir / "rejections.jsonl");
    write_rejections_jsonl(f, corpus.rejections);
  }
  {
    std::size_t positives = 0;
    for (const auto& t : outcome.survivors) positives += t.label ? 1 : 0;
    nlohmann::json j = {{"tickets", corpus.tickets.size()},
                        {"commits", corpus.commits.size()},
                        {"rejected_records", corpus.rejections.size()},
                        {"tickets_without_commits", linked.tickets_without_commits},
                        {"unlinked_commits", linked.unlinked_commits},
                        {"survivors", outcome.survivors.size()},
                        {"bug_inducing", positives}};
    auto f = open_out(dir / "link.json");
    f << j.dump(2) << '\n';
  }
  s.written = {dir / "linked.jsonl", dir / "filter_audit.json", dir / "rejections.jsonl", dir / "link.json"};
  s.message = "ingest: " + std::to_string(outcome.survivors.size()) + " of " + std::to_string(corpus.tickets.size()) +
              " tickets kept";
  return s;
}

StageSummary run_featurize(const RunConfig& c) {
  const auto linked_path = c.out_dir / "ingest" / "linked.jsonl";
  require_file(linked_path, "ingested corpus (run ingest first)");
  require_file(c.repo_metrics, "repo metrics file");
  auto commits = load_commits(c);
  auto population = load_linked(linked_path, commits);
  auto timeline = RepoMetricsTimeline::load(c.repo_metrics);
  text::LexiconSet lexicons = text::LexiconSet::defaults();
  if (!c.lexicons.empty()) {
    require_file(c.lexicons, "lexicon file");
    lexicons = text::LexiconSet::load(c.lexicons);
  }
  ExtractionConfig ec;
  ec.temporal_window_days = c.temporal_window_days;
  const ExtractionContext ctx(std::move(population), std::move(commits), std::move(timeline), make_registry(c),
                              std::move(lexicons), ec);

  const auto dir = stage_dir(c, "features");
  StageSummary s;
  std::ostringstream msg;
  msg << "featurize:";
  for (const auto p : c.points) {
    const auto matrix = build_feature_matrix(ctx, p, c.threads);
    const auto path = features_path(c, p);
    {
      auto f = open_out(path);
      write_feature_matrix(f, matrix);
    }
    const auto excl = dir / (std::string(to_string(p)) + "_excluded.csv");
    {
      auto f = open_out(excl);
      write_exclusions_csv(f, matrix.excluded);
    }
    s.written.push_back(path);
    s.written.push_back(excl);
    msg << ' ' << to_string(p) << '=' << matrix.rows.size();
  }
  s.message = msg.str();
  return s;
}

StageSummary run_evaluate(const RunConfig& c) {
  const auto registry = make_registry(c);
  const auto matrices = load_matrices(c, registry);
  const auto grid = run_experiment_grid(matrices, make_grid_options(c));
  const auto gains = summarize_gains(grid);

  const auto dir = stage_dir(c, "evaluate");
  {
    auto f = open_out(dir / "results.csv");
    write_results_csv(f, grid);
  }
  {
    auto f = open_out(dir / "gains.csv");
    write_gains_csv(f, gains);
  }
  std::size_t failed = 0;
  {
    auto f = open_out(dir / "cell_errors.csv");
    csv::write_row(f, {"proximity", "classifier", "balancing", "selection", "window", "error"});
    for (const auto& r : grid.rows)
      if (!r.error.empty()) {
        ++failed;
        csv::write_row(f, {std::string(to_string(r.point)), std::string(to_string(r.classifier)),
                           std::string(to_string(r.balancing)), std::string(to_string(r.selection)),
                           std::to_string(r.window), r.error});
      }
  }
  {
    auto f = open_out(dir / "windows.csv");
    csv::write_row(f, {"proximity", "window", "standard", "train_begin", "train_end", "test_begin", "test_end"});
    for (const auto& [p, plan] : grid.plans)
      for (const auto& w : plan.windows)
        csv::write_row(f, {std::string(to_string(p)), std::to_string(w.index), plan.standard ? "true" : "false",
                           std::to_string(w.train_begin), std::to_string(w.train_end), std::to_string(w.test_begin),
                           std::to_string(w.test_end)});
  }
  StageSummary s;
  s.written = {dir / "results.csv", dir / "gains.csv", dir / "cell_errors.csv", dir / "windows.csv"};
  s.message = "evaluate: " + std::to_string(grid.rows.size()) + " cells, " + std::to_string(failed) + " failed";
  return s;
}

StageSummary run_power(const RunConfig& c) {
  const auto registry = make_registry(c);
  const auto matrices = load_matrices(c, registry);
  std::vector<IgrRecord> records;
  for (const auto& m : matrices) {
    auto r = compute_igr(m, c.windows, registry, c.igr_bins, c.threads);
    records.insert(records.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  const auto dir = stage_dir(c, "power");
  StageSummary s;
  {
    auto f = open_out(dir / "igr.csv");
    write_igr_csv(f, records);
  }
  {
    auto f = open_out(dir / "family.csv");
    write_family_csv(f, family_aggregate(records, registry));
  }
  s.written = {dir / "igr.csv", dir / "family.csv"};
  for (const auto p : c.points) {
    const auto path = dir / ("ranking_" + std::string(to_string(p)) + ".csv");
    auto f = open_out(path);
    csv::write_row(f, {"rank", "feature", "family", "mean_igr"});
    for (const auto& r : rank_by_mean(records, p).ranked)
      csv::write_row(f, {std::to_string(r.rank), r.feature, std::string(family_tag(r.family)), format_double(r.igr)});
    s.written.push_back(path);
  }
  s.message = "power: " + std::to_string(records.size()) + " IGR records";
  return s;
}

StageSummary run_report(const RunConfig& c) {
  const auto results_path = c.out_dir / "evaluate" / "results.csv";
  require_file(results_path, "evaluation results (run evaluate first)");
  const auto grid = read_results_csv(results_path);
  std::vector<IgrRecord> power;
  const auto igr_path = c.out_dir / "power" / "igr.csv";
  if (std::filesystem::is_regular_file(igr_path)) power = read_igr_csv(igr_path, make_registry(c));
  if (grid.rows.empty()) throw DataError(results_path.string() + ": no evaluation rows");
  const auto dir = c.out_dir / "report";
  const auto files = emit_report(grid, power, dir);
  StageSummary s;
  for (const auto& f : files) s.written.push_back(dir / f.name);
  s.message = "report: " + std::to_string(files.size()) + " files" + (power.empty() ? " (no power section)" : "");
  return s;
}

}  // namespace tlp
