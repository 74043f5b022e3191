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

// tlp: ticket-level defect prediction command line.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlp/config.hpp"
#include "tlp/pipeline.hpp"
#include "tlp/synth.hpp"

namespace {

using namespace tlp;

// Flag values; only flags actually given override the config file.
struct Flags {
  std::string config;
  std::string tickets, commits, repo_metrics, lexicons, out, project, manifest;
  std::vector<std::string> points, classifiers, balancing, selection;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  int temporal_window = 0, baseline_trials = 0, trees = 0, nn_epochs = 0, igr_bins = 0;
  std::size_t window_initial = 0, window_step = 0;
};

struct Given {
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;
  void apply(RunConfig& c) const {
    for (const auto& [opt, set] : setters)
      if (opt->count() > 0) set(c);
  }
};

template <class T, class P>
std::vector<T> parse_list(const std::vector<std::string>& items, P parse) {
  std::vector<T> out;
  for (const auto& item : items) out.push_back(parse(item));
  return out;
}

void add_common(CLI::App* sub, Flags& f, Given& g) {
  auto opt = [&](const char* name, std::string& dst, const char* help, auto setter) {
    g.setters.emplace_back(sub->add_option(name, dst, help), setter);
  };
  opt("--tickets", f.tickets, "Tickets JSON-lines file", [&f](RunConfig& c) { c.tickets = f.tickets; });
  opt("--commits", f.commits, "Commits CSV file", [&f](RunConfig& c) { c.commits = f.commits; });
  opt("--repo-metrics", f.repo_metrics, "Repository metrics timeline CSV",
      [&f](RunConfig& c) { c.repo_metrics = f.repo_metrics; });
  opt("--lexicons", f.lexicons, "Lexicon JSON extending the bundled lists",
      [&f](RunConfig& c) { c.lexicons = f.lexicons; });
  opt("--out", f.out, "Output directory", [&f](RunConfig& c) { c.out_dir = f.out; });
  opt("--project", f.project, "Restrict to one project", [&f](RunConfig& c) { c.project = f.project; });
  opt("--manifest", f.manifest, "Generator manifest declaring repository clarity",
      [&f](RunConfig& c) { c.manifest = f.manifest; });
  g.setters.emplace_back(
      sub->add_option("--points,--point", f.points, "Proximity points (open,in_progress,closed)")->delimiter(','),
      [&f](RunConfig& c) { c.points = parse_list<ProximityPoint>(f.points, parse_point); });
  g.setters.emplace_back(
      sub->add_option("--classifiers", f.classifiers, "Classifiers (rf,lr,nn)")->delimiter(','),
      [&f](RunConfig& c) { c.classifiers = parse_list<LearnerKind>(f.classifiers, parse_learner); });
  g.setters.emplace_back(
      sub->add_option("--balancing", f.balancing, "Balancing axis (none,smote)")->delimiter(','),
      [&f](RunConfig& c) { c.balancing = parse_list<Balancing>(f.balancing, parse_balancing); });
  g.setters.emplace_back(
      sub->add_option("--selection", f.selection, "Selection axis (none,filter)")->delimiter(','),
      [&f](RunConfig& c) { c.selection = parse_list<Selection>(f.selection, parse_selection); });
  g.setters.emplace_back(sub->add_option("--seed", f.seed, "Run seed"), [&f](RunConfig& c) { c.seed = f.seed; });
  g.setters.emplace_back(sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)"),
                         [&f](RunConfig& c) { c.threads = f.threads; });
  g.setters.emplace_back(sub->add_option("--temporal-window", f.temporal_window, "Temporal locality window (days)"),
                         [&f](RunConfig& c) { c.temporal_window_days = f.temporal_window; });
  g.setters.emplace_back(sub->add_option("--baseline-trials", f.baseline_trials, "Random baseline trials"),
                         [&f](RunConfig& c) { c.baseline_trials = f.baseline_trials; });
  g.setters.emplace_back(sub->add_option("--trees", f.trees, "Random forest size"),
                         [&f](RunConfig& c) { c.forest_trees = f.trees; });
  g.setters.emplace_back(sub->add_option("--nn-epochs", f.nn_epochs, "Network epoch limit"),
                         [&f](RunConfig& c) { c.nn_epochs = f.nn_epochs; });
  g.setters.emplace_back(sub->add_option("--igr-bins", f.igr_bins, "Equal-frequency bins for IGR"),
                         [&f](RunConfig& c) { c.igr_bins = f.igr_bins; });
  g.setters.emplace_back(sub->add_option("--window-initial", f.window_initial, "Sliding window size"),
                         [&f](RunConfig& c) { c.windows.initial = f.window_initial; });
  g.setters.emplace_back(sub->add_option("--window-step", f.window_step, "Sliding window step"),
                         [&f](RunConfig& c) { c.windows.step = f.window_step; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ticket-level defect prediction toolkit"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, std::string("Run config JSON (default: $") + kConfigEnv + ")");
  std::string dump_config;
  app.add_option("--dump-config", dump_config, "Write the effective config to this file");

  struct Stage {
    const char* name;
    const char* help;
    StageSummary (*run)(const RunConfig&);
  };
  const Stage stages[] = {
      {"ingest", "Link, label and filter a corpus", run_ingest},
      {"featurize", "Build per-proximity feature matrices", run_featurize},
      {"evaluate", "Run the sliding-window experiment grid", run_evaluate},
      {"power", "Information gain ratio per window and feature", run_power},
      {"report", "Summary and plot-data CSVs", run_report},
  };
  Given given;
  std::vector<std::pair<CLI::App*, const Stage*>> subs;
  for (const auto& s : stages) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, flags, given);
    subs.emplace_back(sub, &s);
  }

  GeneratorSpec gen;
  std::string synth_dir = ".";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--n", gen.tickets, "Ticket count")->capture_default_str();
  synth->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  synth->add_option("--prevalence", gen.prevalence, "Bug-inducing share")->capture_default_str();
  synth->add_option("--project", gen.project, "Project key")->capture_default_str();
  synth->add_option("--signal-open", gen.signals.open, "Priority signal strength")->capture_default_str();
  synth->add_option("--signal-in-progress", gen.signals.in_progress, "Activity signal strength")
      ->capture_default_str();
  synth->add_option("--signal-closed", gen.signals.closed, "Churn signal strength")->capture_default_str();
  synth->add_option("--span-days", gen.span_days, "Timeline span")->capture_default_str();
  synth->add_option("--out", synth_dir, "Directory for the generated files")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      const auto corpus = generate(gen);
      write_generated(corpus, synth_dir);
      std::cout << "synth: " << corpus.tickets.size() << " tickets, " << corpus.commits.size() << " commits -> "
                << synth_dir << '\n';
      return 0;
    }
    RunConfig config = flags.config.empty() ? default_config() : load_config(flags.config);
    given.apply(config);
    validate(config);
    if (!dump_config.empty()) {
      std::ofstream out(dump_config);
      if (!out) throw DataError("cannot write " + dump_config);
      out << config_to_json(config);
    }
    for (const auto& [sub, stage] : subs)
      if (sub->parsed()) {
        const auto summary = stage->run(config);
        std::cout << summary.message << '\n';
      }
    return 0;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
