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

#include "tlp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tlp/csv.hpp"
#include "tlp/parallel.hpp"
#include "tlp/stats.hpp"

namespace tlp {

WindowPlan plan_windows(std::size_t n, const WindowParams& params) {
  if (n < 2) throw InvalidArgument("sliding-window evaluation needs at least 2 instances, got " + std::to_string(n));
  if (params.step == 0 || params.initial < 2 || !(params.train_fraction > 0 && params.train_fraction < 1))
    throw InvalidArgument("invalid window parameters");
  WindowPlan plan;
  auto split = [&](std::size_t size) {
    auto train = static_cast<std::size_t>(std::floor(static_cast<double>(size) * params.train_fraction + 1e-9));
    return std::clamp<std::size_t>(train, 1, size - 1);
  };
  if (n < params.initial) {
    plan.standard = false;
    const auto train = split(n);
    plan.windows.push_back({0, 0, train, train, n});
    return plan;
  }
  const std::size_t count = (n - params.initial) / params.step + 1;
  const auto train = split(params.initial);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * params.step;
    Window w{i, start, start + train, start + train, start + params.initial};
    if (i + 1 == count) w.test_end = n;
    plan.windows.push_back(w);
  }
  return plan;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::F1: return "f1";
    case Metric::Auc: return "auc";
    case Metric::Kappa: return "kappa";
    case Metric::Specificity: return "specificity";
    case Metric::Gmean: return "gmean";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (const auto m : kAllMetrics)
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

double compute_auc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw InvalidArgument("labels and scores differ in length");
  double n_pos = 0;
  for (const int v : y_true) n_pos += v != 0;
  const double n_neg = static_cast<double>(y_true.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) return kNaN;
  const auto ranks = stats::average_ranks(scores);
  double rank_sum = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i]) rank_sum += ranks[i];
  return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg);
}

MetricSet compute_metrics(std::span<const int> y_true, std::span<const double> scores, double threshold) {
  if (y_true.size() != scores.size()) throw InvalidArgument("labels and scores differ in length");
  MetricSet m;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    const bool actual = y_true[i] != 0;
    if (pred && actual) m.tp += 1;
    else if (pred) m.fp += 1;
    else if (actual) m.fn += 1;
    else m.tn += 1;
  }
  auto set = [&](Metric metric, double num, double den, const char* why) {
    if (den > 0) {
      m[metric] = num / den;
    } else {
      m[metric] = kNaN;
      m.undefined[metric] = why;
    }
  };
  set(Metric::Precision, m.tp, m.tp + m.fp, "no positive predictions (TP+FP=0)");
  set(Metric::Recall, m.tp, m.tp + m.fn, "no positive labels (TP+FN=0)");
  set(Metric::Specificity, m.tn, m.tn + m.fp, "no negative labels (TN+FP=0)");

  const double p = m[Metric::Precision], r = m[Metric::Recall], s = m[Metric::Specificity];
  if (std::isnan(p) || std::isnan(r)) {
    m[Metric::F1] = kNaN;
    m.undefined[Metric::F1] = std::isnan(p) ? m.undefined[Metric::Precision] : m.undefined[Metric::Recall];
  } else {
    m[Metric::F1] = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  if (std::isnan(r) || std::isnan(s)) {
    m[Metric::Gmean] = kNaN;
    m.undefined[Metric::Gmean] = std::isnan(r) ? m.undefined[Metric::Recall] : m.undefined[Metric::Specificity];
  } else {
    m[Metric::Gmean] = std::sqrt(r * s);
  }

  const double n = m.tp + m.fp + m.fn + m.tn;
  if (n == 0) {
    m[Metric::Kappa] = kNaN;
    m.undefined[Metric::Kappa] = "empty test set";
  } else {
    const double po = (m.tp + m.tn) / n;
    const double pe = ((m.tp + m.fp) * (m.tp + m.fn) + (m.fn + m.tn) * (m.fp + m.tn)) / (n * n);
    if (pe >= 1.0) {
      m[Metric::Kappa] = kNaN;
      m.undefined[Metric::Kappa] = "chance agreement is 1";
    } else {
      m[Metric::Kappa] = (po - pe) / (1 - pe);
    }
  }
  m[Metric::Auc] = compute_auc(y_true, scores);
  if (std::isnan(m[Metric::Auc])) m.undefined[Metric::Auc] = "single-class labels";
  return m;
}

double nan_mean(std::span<const double> values) {
  double sum = 0;
  std::size_t n = 0;
  for (const double v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : kNaN;
}

MetricSet random_baseline(std::span<const int> y_true, std::uint64_t seed, int trials) {
  if (trials < 1) throw InvalidArgument("random baseline needs at least one trial");
  Rng rng(seed);
  std::vector<double> scores(y_true.size());
  std::array<std::vector<double>, 7> per_metric;
  MetricSet out;
  std::map<Metric, std::string> reasons;
  for (int t = 0; t < trials; ++t) {
    for (auto& s : scores) s = rng.uniform();
    const auto m = compute_metrics(y_true, scores);
    out.tp += m.tp;
    out.fp += m.fp;
    out.fn += m.fn;
    out.tn += m.tn;
    for (const auto metric : kAllMetrics) per_metric[static_cast<std::size_t>(metric)].push_back(m[metric]);
    for (const auto& [metric, why] : m.undefined) reasons.emplace(metric, why);
  }
  const double n = static_cast<double>(trials);
  out.tp /= n;
  out.fp /= n;
  out.fn /= n;
  out.tn /= n;
  for (const auto metric : kAllMetrics) {
    out[metric] = nan_mean(per_metric[static_cast<std::size_t>(metric)]);
    if (std::isnan(out[metric])) out.undefined[metric] = reasons[metric];
  }
  return out;
}

Gain gain_vs_random(const MetricSet& model, const MetricSet& baseline) {
  Gain g;
  for (const auto metric : kAllMetrics) {
    const auto i = static_cast<std::size_t>(metric);
    const double m = model[metric], b = baseline[metric];
    if (std::isnan(m) || std::isnan(b)) {
      g.values[i] = kNaN;
      g.undefined[metric] = std::isnan(m) ? "model metric undefined" : "baseline metric undefined";
    } else if (metric == Metric::Kappa) {
      g.values[i] = 100.0 * (m - b);
    } else if (b == 0) {
      g.values[i] = kNaN;
      g.undefined[metric] = "zero baseline";
    } else {
      g.values[i] = 100.0 * (m - b) / b;
    }
  }
  return g;
}

std::string_view to_string(Balancing b) { return b == Balancing::None ? "none" : "smote"; }
std::string_view to_string(Selection s) { return s == Selection::None ? "none" : "filter"; }

Balancing parse_balancing(std::string_view name) {
  if (name == "none") return Balancing::None;
  if (name == "smote" || name == "SMOTE") return Balancing::Smote;
  throw InvalidArgument("unknown balancing '" + std::string(name) + "'");
}

Selection parse_selection(std::string_view name) {
  if (name == "none") return Selection::None;
  if (name == "filter" || name == "cfs") return Selection::Filter;
  throw InvalidArgument("unknown selection '" + std::string(name) + "'");
}

std::uint64_t cell_seed(std::uint64_t seed, const SetupConfig& setup, std::size_t window) {
  const std::string key = std::to_string(seed) + "/" + std::string(to_string(setup.point)) + "/" +
                          std::string(to_string(setup.classifier)) + "/" + std::string(to_string(setup.balancing)) +
                          "/" + std::string(to_string(setup.selection)) + "/" + std::to_string(window);
  return fnv1a(key);
}

MetricSet evaluate_cell(const EncodedDataset& data, const Window& window, const SetupConfig& setup,
                        const GridOptions& options) {
  if (window.test_end > data.x.rows()) throw InvalidArgument("window exceeds the dataset");
  Matrix x_train = data.x.slice_rows(window.train_begin, window.train_end);
  Matrix x_test = data.x.slice_rows(window.test_begin, window.test_end);
  std::vector<int> y_train(data.y.begin() + static_cast<std::ptrdiff_t>(window.train_begin),
                           data.y.begin() + static_cast<std::ptrdiff_t>(window.train_end));
  const std::vector<int> y_test(data.y.begin() + static_cast<std::ptrdiff_t>(window.test_begin),
                                data.y.begin() + static_cast<std::ptrdiff_t>(window.test_end));
  if (setup.selection == Selection::Filter && x_train.cols() > 0) {
    const auto keep = select_features_cfs(x_train, y_train);
    x_train = x_train.select_cols(keep);
    x_test = x_test.select_cols(keep);
  }
  if (setup.balancing == Balancing::Smote) {
    const bool both = std::count(y_train.begin(), y_train.end(), 1) > 0 && std::count(y_train.begin(), y_train.end(), 0) > 0;
    if (both) {
      auto balanced = smote_balance(x_train, y_train, options.smote_k, setup.seed ^ 0x5A5A5A5AULL);
      x_train = std::move(balanced.x);
      y_train = std::move(balanced.y);
    }
  }
  LearnerSpec spec = options.learner;
  spec.kind = setup.classifier;
  spec.seed = setup.seed;
  const auto model = train(spec, x_train, y_train);
  return compute_metrics(y_test, model.predict_scores(x_test));
}

GridResult run_experiment_grid(std::span<const FeatureMatrix> datasets, const GridOptions& options) {
  GridResult result;
  struct Prepared {
    ProximityPoint point;
    EncodedDataset one_hot, ordinal;
    WindowPlan plan;
  };
  std::vector<Prepared> prepared;
  for (const auto& d : datasets) {
    Prepared p{d.point, encode(d, Encoding::OneHot), encode(d, Encoding::Ordinal), {}};
    p.plan = plan_windows(d.rows.size(), options.windows);
    result.plans[d.point] = p.plan;
    prepared.push_back(std::move(p));
  }

  struct Task {
    std::size_t dataset;
    SetupConfig setup;
    std::size_t window;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < prepared.size(); ++d)
    for (const auto c : options.classifiers)
      for (const auto b : options.balancing)
        for (const auto s : options.selection)
          for (const auto& w : prepared[d].plan.windows) {
            SetupConfig setup{b, s, c, prepared[d].point, 0};
            setup.seed = cell_seed(options.seed, setup, w.index);
            tasks.push_back({d, setup, w.index});
          }
  result.rows.resize(tasks.size());
  std::vector<std::pair<std::size_t, std::size_t>> baseline_keys;
  for (std::size_t d = 0; d < prepared.size(); ++d)
    for (const auto& w : prepared[d].plan.windows) baseline_keys.emplace_back(d, w.index);
  result.baselines.resize(baseline_keys.size());

  parallel_for(tasks.size() + baseline_keys.size(), options.threads, [&](std::size_t i) {
    if (i >= tasks.size()) {
      const auto [d, w] = baseline_keys[i - tasks.size()];
      const auto& p = prepared[d];
      const auto& win = p.plan.windows[w];
      const std::vector<int> y_test(p.one_hot.y.begin() + static_cast<std::ptrdiff_t>(win.test_begin),
                                    p.one_hot.y.begin() + static_cast<std::ptrdiff_t>(win.test_end));
      const auto seed = fnv1a(std::to_string(options.seed) + "/random/" + std::string(to_string(p.point)) + "/" +
                              std::to_string(w));
      result.baselines[i - tasks.size()] = {p.point, w, random_baseline(y_test, seed, options.baseline_trials)};
      return;
    }
    const auto& task = tasks[i];
    const auto& p = prepared[task.dataset];
    auto& row = result.rows[i];
    row.project = options.project;
    row.point = task.setup.point;
    row.classifier = task.setup.classifier;
    row.balancing = task.setup.balancing;
    row.selection = task.setup.selection;
    row.window = task.window;
    const auto& data = task.setup.classifier == LearnerKind::RF ? p.ordinal : p.one_hot;
    try {
      row.metrics = evaluate_cell(data, p.plan.windows[task.window], task.setup, options);
    } catch (const std::exception& e) {
      row.error = e.what();
      for (const auto m : kAllMetrics) {
        row.metrics[m] = kNaN;
        row.metrics.undefined[m] = "cell failed";
      }
    }
  });
  return result;
}

std::vector<GainRow> summarize_gains(const GridResult& grid) {
  std::map<std::pair<ProximityPoint, std::size_t>, const MetricSet*> baseline;
  for (const auto& b : grid.baselines) baseline[{b.point, b.window}] = &b.metrics;

  struct Key {
    ProximityPoint point;
    LearnerKind classifier;
    Balancing balancing;
    Selection selection;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const auto& r : grid.rows) groups[{r.point, r.classifier, r.balancing, r.selection}].push_back(&r);

  std::vector<GainRow> out;
  struct AllKey {
    ProximityPoint point;
    Balancing balancing;
    Selection selection;
    Metric metric;
    auto operator<=>(const AllKey&) const = default;
  };
  std::map<AllKey, std::vector<double>> all;
  for (const auto& [key, rows] : groups) {
    for (const auto metric : kAllMetrics) {
      std::vector<double> model, base;
      for (const auto* r : rows) {
        const double m = r->metrics[metric];
        const auto it = baseline.find({r->point, r->window});
        const double b = it == baseline.end() ? kNaN : (*it->second)[metric];
        if (std::isnan(m) || std::isnan(b)) continue;
        model.push_back(m);
        base.push_back(b);
      }
      GainRow g{key.point, std::string(to_string(key.classifier)), key.balancing, key.selection, metric,
                nan_mean(model), nan_mean(base), kNaN, ""};
      if (model.empty()) {
        g.reason = "no window with defined model and baseline values";
      } else {
        MetricSet ms, bs;
        ms[metric] = g.model;
        bs[metric] = g.baseline;
        const auto gain = gain_vs_random(ms, bs);
        g.gain = gain[metric];
        if (const auto it = gain.undefined.find(metric); it != gain.undefined.end()) g.reason = it->second;
      }
      all[{key.point, key.balancing, key.selection, metric}].push_back(g.gain);
      out.push_back(std::move(g));
    }
  }
  for (const auto& [key, gains] : all) {
    GainRow g{key.point, "all", key.balancing, key.selection, key.metric, kNaN, kNaN, nan_mean(gains), ""};
    std::vector<double> model, base;
    for (const auto& row : out)
      if (row.classifier != "all" && row.point == key.point && row.balancing == key.balancing &&
          row.selection == key.selection && row.metric == key.metric) {
        model.push_back(row.model);
        base.push_back(row.baseline);
      }
    g.model = nan_mean(model);
    g.baseline = nan_mean(base);
    if (std::isnan(g.gain)) g.reason = "no classifier with a defined gain";
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

csv::Row metric_cells(const MetricSet& m) {
  csv::Row row = {format_double(m.tp), format_double(m.fp), format_double(m.fn), format_double(m.tn)};
  for (const auto metric : kAllMetrics) row.push_back(format_double(m[metric]));
  return row;
}

}  // namespace

void write_results_csv(std::ostream& out, const GridResult& grid) {
  csv::write_row(out, {"project", "proximity", "classifier", "balancing", "selection", "window", "TP", "FP", "FN", "TN",
                       "precision", "recall", "f1", "auc", "kappa", "specificity", "gmean"});
  std::string project = grid.rows.empty() ? "" : grid.rows.front().project;
  for (const auto& r : grid.rows) {
    csv::Row row = {r.project,
                    std::string(to_string(r.point)),
                    std::string(to_string(r.classifier)),
                    std::string(to_string(r.balancing)),
                    std::string(to_string(r.selection)),
                    std::to_string(r.window)};
    const auto cells = metric_cells(r.metrics);
    row.insert(row.end(), cells.begin(), cells.end());
    csv::write_row(out, row);
  }
  for (const auto& b : grid.baselines) {
    csv::Row row = {project, std::string(to_string(b.point)), "random", "none", "none", std::to_string(b.window)};
    const auto cells = metric_cells(b.metrics);
    row.insert(row.end(), cells.begin(), cells.end());
    csv::write_row(out, row);
  }
}

void write_gains_csv(std::ostream& out, std::span<const GainRow> gains) {
  csv::write_row(out, {"proximity", "classifier", "balancing", "selection", "metric", "model_mean", "baseline_mean",
                       "gain_percent", "reason"});
  for (const auto& g : gains)
    csv::write_row(out, {std::string(to_string(g.point)), g.classifier, std::string(to_string(g.balancing)),
                         std::string(to_string(g.selection)), std::string(to_string(g.metric)), format_double(g.model),
                         format_double(g.baseline), format_double(g.gain), g.reason});
}

namespace {

MetricSet parse_metric_cells(const csv::Table& table, const csv::Row& row) {
  MetricSet m;
  m.tp = parse_double(row.at(table.column("TP")));
  m.fp = parse_double(row.at(table.column("FP")));
  m.fn = parse_double(row.at(table.column("FN")));
  m.tn = parse_double(row.at(table.column("TN")));
  for (const auto metric : kAllMetrics) {
    m[metric] = parse_double(row.at(table.column(to_string(metric))));
    if (std::isnan(m[metric])) m.undefined[metric] = "undefined in source table";
  }
  return m;
}

}  // namespace

GridResult read_results_csv(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  GridResult grid;
  try {
    const auto cp = table.column("project"), cx = table.column("proximity"), cc = table.column("classifier"),
               cb = table.column("balancing"), cs = table.column("selection"), cw = table.column("window");
    for (const auto& row : table.rows) {
      const auto point = parse_point(row.at(cx));
      const auto window = static_cast<std::size_t>(parse_int(row.at(cw)));
      if (row.at(cc) == "random") {
        grid.baselines.push_back({point, window, parse_metric_cells(table, row)});
        continue;
      }
      ResultRow r;
      r.project = row.at(cp);
      r.point = point;
      r.classifier = parse_learner(row.at(cc));
      r.balancing = parse_balancing(row.at(cb));
      r.selection = parse_selection(row.at(cs));
      r.window = window;
      r.metrics = parse_metric_cells(table, row);
      grid.rows.push_back(std::move(r));
    }
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return grid;
}

std::vector<GainRow> read_gains_csv(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  std::vector<GainRow> out;
  try {
    const auto cx = table.column("proximity"), cc = table.column("classifier"), cb = table.column("balancing"),
               cs = table.column("selection"), cm = table.column("metric"), cmo = table.column("model_mean"),
               cba = table.column("baseline_mean"), cg = table.column("gain_percent"), cr = table.column("reason");
    for (const auto& row : table.rows) {
      GainRow g;
      g.point = parse_point(row.at(cx));
      g.classifier = row.at(cc);
      g.balancing = parse_balancing(row.at(cb));
      g.selection = parse_selection(row.at(cs));
      g.metric = parse_metric(row.at(cm));
      g.model = parse_double(row.at(cmo));
      g.baseline = parse_double(row.at(cba));
      g.gain = parse_double(row.at(cg));
      g.reason = row.at(cr);
      out.push_back(std::move(g));
    }
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace tlp
