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

// Random forest, logistic regression and a one-hidden-layer network behind
// a common train/score interface, plus SMOTE and CFS feature selection.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlp/features.hpp"

namespace tlp {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  void append_row(std::span<const double> values);

  /// Rows [begin, end).
  Matrix slice_rows(std::size_t begin, std::size_t end) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  Matrix select_cols(std::span<const std::size_t> cols) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

enum class Encoding { OneHot, Ordinal };

/// Numeric design matrix derived from a FeatureMatrix.
struct EncodedDataset {
  std::vector<std::string> columns;  // "priority=Major" for one-hot levels
  Matrix x;
  std::vector<int> y;
  std::vector<std::string> ticket_ids;
};

/// Drops columns MISSING in every row, encodes categorical columns
/// (one-hot or sorted-level ordinal index; level vocabulary from the whole
/// matrix) and encodes remaining MISSING cells as 0.
EncodedDataset encode(const FeatureMatrix& matrix, Encoding encoding);

enum class LearnerKind { RF, LR, NN };
std::string_view to_string(LearnerKind kind);
LearnerKind parse_learner(std::string_view name);

struct ForestParams {
  int trees = 100;
  int max_depth = 0;  // 0 = unlimited
  int min_samples_split = 2;
};

struct LogisticParams {
  double l2 = 1.0;
  double tolerance = 1e-6;
  int max_iterations = 100;
};

struct NetworkParams {
  int hidden = 100;
  double learning_rate = 1e-3;
  int batch_size = 200;
  double l2 = 1e-4;
  int epochs = 200;
  int patience = 10;
  double min_improvement = 1e-4;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::RF;
  ForestParams forest;
  LogisticParams logistic;
  NetworkParams network;
  std::uint64_t seed = 1;
};

class TrainedModel {
 public:
  struct Impl;

  LearnerKind kind() const { return kind_; }
  /// True when trained on a single class; scores are then the class prior.
  bool degenerate() const { return degenerate_; }
  std::size_t feature_count() const { return features_; }

  /// One score in [0, 1] per row; throws InvalidArgument on a column-count
  /// mismatch.
  std::vector<double> predict_scores(const Matrix& x) const;
  /// Flat parameter dump, for audit and determinism checks.
  std::vector<double> parameters() const;

 private:
  friend TrainedModel train(const LearnerSpec& spec, const Matrix& x, std::span<const int> y);
  LearnerKind kind_ = LearnerKind::RF;
  bool degenerate_ = false;
  double prior_ = 0;
  std::size_t features_ = 0;
  std::shared_ptr<const Impl> impl_;
};

/// Throws InvalidArgument for empty or mismatched input.
TrainedModel train(const LearnerSpec& spec, const Matrix& x, std::span<const int> y);

struct SmoteResult {
  Matrix x;
  std::vector<int> y;
  /// For each appended synthetic row (rows >= original count): the base
  /// row and the neighbour it was interpolated towards.
  std::vector<std::pair<std::size_t, std::size_t>> origins;
};

/// Appends synthetic minority rows until both classes have equal counts.
/// Original rows keep their order and values. Throws InvalidArgument when a
/// class is empty.
SmoteResult smote_balance(const Matrix& x, std::span<const int> y, int k, std::uint64_t seed);

/// Greedy forward correlation-based subset selection with symmetric
/// uncertainty on 10-bin equal-frequency discretized columns. Returns the
/// retained column indices in selection order; never empty for cols > 0.
std::vector<std::size_t> select_features_cfs(const Matrix& x, std::span<const int> y, int bins = 10);

/// Merit of a subset: k * mean(r_cf) / sqrt(k + k(k-1) * mean(r_ff)).
double cfs_merit(std::span<const double> r_cf, std::span<const double> r_ff_pairs);

}  // namespace tlp
