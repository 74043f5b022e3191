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

// Sliding-window evaluation: window planning, accuracy metrics, the random
// baseline and the balancing x selection x classifier x proximity grid.

#pragma once

#include <array>
#include <filesystem>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlp/features.hpp"
#include "tlp/learners.hpp"

namespace tlp {

struct WindowParams {
  std::size_t initial = 1000;
  std::size_t step = 200;
  double train_fraction = 0.8;
  bool operator==(const WindowParams&) const = default;
};

struct Window {
  std::size_t index = 0;
  std::size_t train_begin = 0, train_end = 0;  // [begin, end)
  std::size_t test_begin = 0, test_end = 0;
  std::size_t train_size() const { return train_end - train_begin; }
  std::size_t test_size() const { return test_end - test_begin; }
};

struct WindowPlan {
  std::vector<Window> windows;
  /// False for the single holdout used when n < initial.
  bool standard = true;
};

/// Window i starts at step * i and spans `initial` rows split train/test by
/// train_fraction; leftover rows (< step) after the last full window extend
/// its test range. n < initial yields one non-standard holdout over all
/// rows. Throws InvalidArgument for n < 2.
WindowPlan plan_windows(std::size_t n, const WindowParams& params = {});

enum class Metric { Precision, Recall, F1, Auc, Kappa, Specificity, Gmean };
inline constexpr Metric kAllMetrics[] = {Metric::Precision, Metric::Recall,      Metric::F1,   Metric::Auc,
                                         Metric::Kappa,     Metric::Specificity, Metric::Gmean};
std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

struct MetricSet {
  // Confusion counts; fractional for averaged baselines.
  double tp = 0, fp = 0, fn = 0, tn = 0;
  std::array<double, 7> values{};  // indexed by Metric
  /// Reason for every NaN entry.
  std::map<Metric, std::string> undefined;

  double operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  double& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
};

/// Hard predictions are score >= threshold. Throws InvalidArgument on a
/// length mismatch.
MetricSet compute_metrics(std::span<const int> y_true, std::span<const double> scores, double threshold = 0.5);

/// Rank (Mann-Whitney) AUC with ties counted one half; NaN when a class is
/// absent.
double compute_auc(std::span<const int> y_true, std::span<const double> scores);

/// Uniform random scores thresholded at 0.5, metrics averaged over trials
/// (undefined trials skipped per metric).
MetricSet random_baseline(std::span<const int> y_true, std::uint64_t seed, int trials = 1000);

struct Gain {
  std::array<double, 7> values{};
  std::map<Metric, std::string> undefined;
  double operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
};

/// 100 * (model - baseline) / baseline per metric; Kappa, whose random
/// expectation is 0, is reported as the percentage-point difference
/// 100 * (model - baseline). Zero or undefined inputs give NaN with reason.
Gain gain_vs_random(const MetricSet& model, const MetricSet& baseline);

enum class Balancing { None, Smote };
enum class Selection { None, Filter };
std::string_view to_string(Balancing b);
std::string_view to_string(Selection s);
Balancing parse_balancing(std::string_view name);
Selection parse_selection(std::string_view name);

struct SetupConfig {
  Balancing balancing = Balancing::None;
  Selection selection = Selection::None;
  LearnerKind classifier = LearnerKind::RF;
  ProximityPoint point = ProximityPoint::Open;
  std::uint64_t seed = 1;
};

struct GridOptions {
  std::string project;
  std::vector<LearnerKind> classifiers = {LearnerKind::RF, LearnerKind::LR, LearnerKind::NN};
  std::vector<Balancing> balancing = {Balancing::None, Balancing::Smote};
  std::vector<Selection> selection = {Selection::None, Selection::Filter};
  WindowParams windows;
  LearnerSpec learner;  // hyperparameters; kind and seed are set per cell
  std::uint64_t seed = 1;
  int smote_k = 5;
  int baseline_trials = 1000;
  unsigned threads = 0;
};

struct ResultRow {
  std::string project;
  ProximityPoint point = ProximityPoint::Open;
  LearnerKind classifier = LearnerKind::RF;
  Balancing balancing = Balancing::None;
  Selection selection = Selection::None;
  std::size_t window = 0;
  MetricSet metrics;
  std::string error;  // non-empty when the cell failed
};

struct BaselineRow {
  ProximityPoint point = ProximityPoint::Open;
  std::size_t window = 0;
  MetricSet metrics;
};

struct GridResult {
  std::vector<ResultRow> rows;            // ordered by point, classifier, balancing, selection, window
  std::vector<BaselineRow> baselines;     // ordered by point, window
  std::map<ProximityPoint, WindowPlan> plans;
};

/// Deterministic per-cell seed derived from the run seed and the cell key.
std::uint64_t cell_seed(std::uint64_t seed, const SetupConfig& setup, std::size_t window);

/// Evaluates one setup on one window of an encoded dataset.
MetricSet evaluate_cell(const EncodedDataset& data, const Window& window, const SetupConfig& setup,
                        const GridOptions& options);

/// Runs every (point x classifier x balancing x selection x window) cell.
/// Failing cells are recorded with an error and NaN metrics.
GridResult run_experiment_grid(std::span<const FeatureMatrix> datasets, const GridOptions& options);

struct GainRow {
  ProximityPoint point = ProximityPoint::Open;
  std::string classifier;  // "all" for the mean across classifiers
  Balancing balancing = Balancing::None;
  Selection selection = Selection::None;
  Metric metric = Metric::Auc;
  double model = 0;     // mean over windows
  double baseline = 0;  // mean over the same windows
  double gain = 0;
  std::string reason;
};

/// Per-setup gains over the random baseline, plus the across-classifier
/// average (classifier "all").
std::vector<GainRow> summarize_gains(const GridResult& grid);

/// Mean over defined values; NaN when none are defined.
double nan_mean(std::span<const double> values);

void write_results_csv(std::ostream& out, const GridResult& grid);
void write_gains_csv(std::ostream& out, std::span<const GainRow> gains);

/// Parses write_results_csv output; "random" rows become baselines. Window
/// plans and cell errors are not part of the table and stay empty. NaN
/// metrics come back with a generic reason. Throws DataError.
GridResult read_results_csv(const std::filesystem::path& path);
std::vector<GainRow> read_gains_csv(const std::filesystem::path& path);

}  // namespace tlp
