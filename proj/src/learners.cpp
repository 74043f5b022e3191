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

#include "tlp/learners.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "tlp/stats.hpp"

namespace tlp {

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw InvalidArgument("row width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::slice_rows(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows_) throw InvalidArgument("row slice out of range");
  Matrix m(end - begin, cols_);
  std::copy(data_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>(end * cols_), m.data_.begin());
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix m(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(row(rows[i]).begin(), row(rows[i]).end(), m.row(i).begin());
  return m;
}

Matrix Matrix::select_cols(std::span<const std::size_t> cols) const {
  Matrix m(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = (*this)(r, cols[c]);
  return m;
}

EncodedDataset encode(const FeatureMatrix& matrix, Encoding encoding) {
  const auto& registry = default_registry();
  EncodedDataset out;
  const std::size_t n = matrix.rows.size();
  struct Plan {
    std::size_t source;
    bool categorical;
    std::vector<std::string> levels;
  };
  std::vector<Plan> plans;
  for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
    bool any = false;
    std::set<std::string> levels;
    bool categorical = false;
    if (const auto i = registry.find(matrix.columns[c])) categorical = registry[*i].kind == ValueKind::Categorical;
    for (const auto& r : matrix.rows) {
      const auto& v = r.values[c];
      if (is_missing(v)) continue;
      any = true;
      if (const auto* s = std::get_if<std::string>(&v)) {
        categorical = true;
        levels.insert(*s);
      }
    }
    if (!any) continue;
    plans.push_back({c, categorical, {levels.begin(), levels.end()}});
    if (categorical && encoding == Encoding::OneHot) {
      for (const auto& l : levels) out.columns.push_back(matrix.columns[c] + "=" + l);
    } else {
      out.columns.push_back(matrix.columns[c]);
    }
  }
  out.x = Matrix(n, out.columns.size());
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = matrix.rows[r];
    out.y.push_back(row.label ? 1 : 0);
    out.ticket_ids.push_back(row.ticket_id);
    std::size_t col = 0;
    for (const auto& p : plans) {
      const auto& v = row.values[p.source];
      if (!p.categorical) {
        const auto* d = std::get_if<double>(&v);
        out.x(r, col++) = d ? *d : 0.0;
        continue;
      }
      const auto* s = std::get_if<std::string>(&v);
      std::size_t level = p.levels.size();
      if (s) level = static_cast<std::size_t>(std::lower_bound(p.levels.begin(), p.levels.end(), *s) - p.levels.begin());
      if (encoding == Encoding::OneHot) {
        for (std::size_t l = 0; l < p.levels.size(); ++l) out.x(r, col++) = (l == level) ? 1.0 : 0.0;
      } else {
        out.x(r, col++) = s ? static_cast<double>(level + 1) : 0.0;
      }
    }
  }
  return out;
}

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::RF: return "rf";
    case LearnerKind::LR: return "lr";
    case LearnerKind::NN: return "nn";
  }
  return "?";
}

LearnerKind parse_learner(std::string_view name) {
  if (name == "rf" || name == "RF") return LearnerKind::RF;
  if (name == "lr" || name == "LR") return LearnerKind::LR;
  if (name == "nn" || name == "NN") return LearnerKind::NN;
  throw InvalidArgument("unknown classifier '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Models

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct Scaler {
  std::vector<double> mean, scale;

  static Scaler fit(const Matrix& x) {
    Scaler s;
    s.mean.assign(x.cols(), 0.0);
    s.scale.assign(x.cols(), 1.0);
    const double n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      double sum = 0;
      for (std::size_t r = 0; r < x.rows(); ++r) sum += x(r, c);
      const double m = sum / n;
      double ss = 0;
      for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - m) * (x(r, c) - m);
      const double sd = std::sqrt(ss / n);
      s.mean[c] = m;
      s.scale[c] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
  }
  Matrix apply(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
    return out;
  }
};

struct Node {
  int feature = -1;  // -1 for leaves
  double threshold = 0;
  int left = -1, right = -1;
  double vote = 0;  // leaf vote in {0, 0.5, 1}
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, const ForestParams& params, Rng& rng)
      : x_(x), y_(y), params_(params), rng_(rng) {
    mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols()))));
  }

  std::vector<Node> build(std::vector<std::size_t> rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  int leaf(std::span<const std::size_t> rows) {
    double pos = 0;
    for (const auto r : rows) pos += y_[r];
    const double frac = pos / static_cast<double>(rows.size());
    Node n;
    n.vote = frac > 0.5 ? 1.0 : (frac < 0.5 ? 0.0 : 0.5);
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
  }

  int grow(std::vector<std::size_t>& rows, int depth) {
    double pos = 0;
    for (const auto r : rows) pos += y_[r];
    const double total = static_cast<double>(rows.size());
    const bool pure = pos == 0 || pos == total;
    if (pure || rows.size() < static_cast<std::size_t>(std::max(2, params_.min_samples_split)) ||
        (params_.max_depth > 0 && depth >= params_.max_depth))
      return leaf(rows);

    std::vector<std::size_t> features(x_.cols());
    std::iota(features.begin(), features.end(), std::size_t{0});
    const double parent_gini = 1.0 - (pos / total) * (pos / total) - (1 - pos / total) * (1 - pos / total);
    double best_score = -1;
    int best_feature = -1;
    double best_threshold = 0;
    std::vector<std::pair<double, int>> pairs(rows.size());
    for (std::size_t tried = 0; tried < features.size(); ++tried) {
      if (tried >= mtry_ && best_feature >= 0) break;
      const std::size_t pick = tried + rng_.below(features.size() - tried);
      std::swap(features[tried], features[pick]);
      const std::size_t f = features[tried];
      for (std::size_t i = 0; i < rows.size(); ++i) pairs[i] = {x_(rows[i], f), y_[rows[i]]};
      std::sort(pairs.begin(), pairs.end());
      if (pairs.front().first == pairs.back().first) continue;
      double left_n = 0, left_pos = 0;
      for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        left_n += 1;
        left_pos += pairs[i].second;
        if (pairs[i].first == pairs[i + 1].first) continue;
        const double right_n = total - left_n, right_pos = pos - left_pos;
        const double pl = left_pos / left_n, pr = right_pos / right_n;
        const double gini_l = 1.0 - pl * pl - (1 - pl) * (1 - pl);
        const double gini_r = 1.0 - pr * pr - (1 - pr) * (1 - pr);
        const double decrease = parent_gini - (left_n * gini_l + right_n * gini_r) / total;
        if (decrease > best_score + 1e-15) {
          best_score = decrease;
          best_feature = static_cast<int>(f);
          best_threshold = pairs[i].first + (pairs[i + 1].first - pairs[i].first) / 2.0;
          if (best_threshold >= pairs[i + 1].first) best_threshold = pairs[i].first;
        }
      }
    }
    if (best_feature < 0) return leaf(rows);

    std::vector<std::size_t> left, right;
    for (const auto r : rows) (x_(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({best_feature, best_threshold, -1, -1, 0});
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  const Matrix& x_;
  std::span<const int> y_;
  const ForestParams& params_;
  Rng& rng_;
  std::size_t mtry_;
  std::vector<Node> nodes_;
};

double tree_vote(const std::vector<Node>& tree, std::span<const double> row) {
  std::size_t i = 0;
  while (tree[i].feature >= 0)
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold ? tree[i].left
                                                                                                      : tree[i].right);
  return tree[i].vote;
}

// Solves A x = b for symmetric positive definite A (row-major, n x n).
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (d <= 0) d = 1e-12;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

}  // namespace

struct TrainedModel::Impl {
  Scaler scaler;
  // RF
  std::vector<std::vector<Node>> trees;
  // LR: weights[0] is the intercept.
  std::vector<double> weights;
  // NN: w1 is hidden x inputs, w2 is hidden.
  std::size_t hidden = 0;
  std::vector<double> w1, b1, w2;
  double b2 = 0;
};

namespace {

std::vector<std::vector<Node>> fit_forest(const Matrix& x, std::span<const int> y, const ForestParams& params,
                                          std::uint64_t seed) {
  Rng rng(seed);
  TreeBuilder builder(x, y, params, rng);
  std::vector<std::vector<Node>> trees;
  for (int t = 0; t < std::max(1, params.trees); ++t) {
    std::vector<std::size_t> rows(x.rows());
    for (auto& r : rows) r = rng.below(x.rows());
    trees.push_back(builder.build(std::move(rows)));
  }
  return trees;
}

double logistic_loss(const Matrix& z, std::span<const int> y, const std::vector<double>& w, double l2) {
  double loss = 0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    double s = w[0];
    for (std::size_t c = 0; c < z.cols(); ++c) s += w[c + 1] * z(r, c);
    // log(1 + exp(s)) - y s, computed stably.
    loss += (s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s))) - y[r] * s;
  }
  for (std::size_t c = 1; c < w.size(); ++c) loss += 0.5 * l2 * w[c] * w[c];
  return loss;
}

std::vector<double> fit_logistic(const Matrix& z, std::span<const int> y, const LogisticParams& params) {
  const std::size_t p = z.cols() + 1;
  std::vector<double> w(p, 0.0);
  double loss = logistic_loss(z, y, w, params.l2);
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    std::vector<double> grad(p, 0.0), hess(p * p, 0.0);
    std::vector<double> xi(p);
    for (std::size_t r = 0; r < z.rows(); ++r) {
      xi[0] = 1.0;
      for (std::size_t c = 0; c < z.cols(); ++c) xi[c + 1] = z(r, c);
      double s = 0;
      for (std::size_t c = 0; c < p; ++c) s += w[c] * xi[c];
      const double pr = sigmoid(s);
      const double wt = std::max(pr * (1 - pr), 1e-12);
      for (std::size_t a = 0; a < p; ++a) {
        grad[a] += (pr - y[r]) * xi[a];
        const double wa = wt * xi[a];
        for (std::size_t b = 0; b <= a; ++b) hess[a * p + b] += wa * xi[b];
      }
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < a; ++b) hess[b * p + a] = hess[a * p + b];
    for (std::size_t a = 1; a < p; ++a) {
      grad[a] += params.l2 * w[a];
      hess[a * p + a] += params.l2;
    }
    hess[0] += 1e-10;
    const auto step = cholesky_solve(hess, grad, p);
    double t = 1.0;
    std::vector<double> next(p);
    double next_loss = loss;
    for (int halving = 0; halving < 30; ++halving) {
      for (std::size_t a = 0; a < p; ++a) next[a] = w[a] - t * step[a];
      next_loss = logistic_loss(z, y, next, params.l2);
      if (next_loss <= loss + 1e-12) break;
      t /= 2;
    }
    double max_change = 0;
    for (std::size_t a = 0; a < p; ++a) max_change = std::max(max_change, std::fabs(next[a] - w[a]));
    w = next;
    loss = next_loss;
    if (max_change < params.tolerance) break;
  }
  return w;
}

struct Adam {
  std::vector<double> m, v;
  double b1t = 1, b2t = 1;
  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
  void step(std::span<double> params, std::span<const double> grad, double lr) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    b1t *= b1;
    b2t *= b2;
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = b1 * m[i] + (1 - b1) * grad[i];
      v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
      const double mh = m[i] / (1 - b1t), vh = v[i] / (1 - b2t);
      params[i] -= lr * mh / (std::sqrt(vh) + eps);
    }
  }
};

void fit_network(TrainedModel::Impl& im, const Matrix& z, std::span<const int> y, const NetworkParams& params,
                 std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d = z.cols(), h = static_cast<std::size_t>(std::max(1, params.hidden));
  im.hidden = h;
  const double lim1 = std::sqrt(6.0 / static_cast<double>(d + h)), lim2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  im.w1.resize(h * d);
  im.b1.resize(h);
  im.w2.resize(h);
  for (auto& w : im.w1) w = (2 * rng.uniform() - 1) * lim1;
  for (auto& b : im.b1) b = (2 * rng.uniform() - 1) * lim1;
  for (auto& w : im.w2) w = (2 * rng.uniform() - 1) * lim2;
  im.b2 = (2 * rng.uniform() - 1) * lim2;

  Adam opt_w1(im.w1.size()), opt_b1(h), opt_w2(h), opt_b2(1);
  std::vector<double> g_w1(im.w1.size()), g_b1(h), g_w2(h), act(h), pre(h);
  std::vector<std::size_t> order(z.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = static_cast<std::size_t>(std::max(1, params.batch_size));
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double bn = static_cast<double>(end - start);
      std::fill(g_w1.begin(), g_w1.end(), 0.0);
      std::fill(g_b1.begin(), g_b1.end(), 0.0);
      std::fill(g_w2.begin(), g_w2.end(), 0.0);
      double g_b2 = 0, batch_loss = 0;
      for (std::size_t k = start; k < end; ++k) {
        const auto x = z.row(order[k]);
        double out = im.b2;
        for (std::size_t j = 0; j < h; ++j) {
          double s = im.b1[j];
          const double* wj = &im.w1[j * d];
          for (std::size_t c = 0; c < d; ++c) s += wj[c] * x[c];
          pre[j] = s;
          act[j] = s > 0 ? s : 0;
          out += im.w2[j] * act[j];
        }
        const double p = sigmoid(out);
        const double yk = y[order[k]];
        batch_loss -= yk * std::log(std::max(p, 1e-15)) + (1 - yk) * std::log(std::max(1 - p, 1e-15));
        const double delta = (p - yk) / bn;
        g_b2 += delta;
        for (std::size_t j = 0; j < h; ++j) {
          g_w2[j] += delta * act[j];
          if (pre[j] <= 0) continue;
          const double dj = delta * im.w2[j];
          g_b1[j] += dj;
          double* gj = &g_w1[j * d];
          for (std::size_t c = 0; c < d; ++c) gj[c] += dj * x[c];
        }
      }
      double reg = 0;
      for (std::size_t i = 0; i < im.w1.size(); ++i) {
        g_w1[i] += params.l2 * im.w1[i] / bn;
        reg += im.w1[i] * im.w1[i];
      }
      for (std::size_t j = 0; j < h; ++j) {
        g_w2[j] += params.l2 * im.w2[j] / bn;
        reg += im.w2[j] * im.w2[j];
      }
      epoch_loss += batch_loss + 0.5 * params.l2 * reg * (bn / static_cast<double>(order.size()));
      opt_w1.step(im.w1, g_w1, params.learning_rate);
      opt_b1.step(im.b1, g_b1, params.learning_rate);
      opt_w2.step(im.w2, g_w2, params.learning_rate);
      double b2v[1] = {im.b2};
      const double gb2[1] = {g_b2};
      opt_b2.step(b2v, gb2, params.learning_rate);
      im.b2 = b2v[0];
    }
    epoch_loss /= static_cast<double>(order.size());
    if (epoch_loss > best - params.min_improvement) {
      if (++stale >= params.patience) break;
    } else {
      stale = 0;
    }
    best = std::min(best, epoch_loss);
  }
}

}  // namespace

TrainedModel train(const LearnerSpec& spec, const Matrix& x, std::span<const int> y) {
  if (x.rows() == 0) throw InvalidArgument("cannot train on an empty dataset");
  if (x.rows() != y.size()) throw InvalidArgument("feature and label counts differ");
  TrainedModel model;
  model.kind_ = spec.kind;
  model.features_ = x.cols();
  double pos = 0;
  for (const int v : y) {
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
    pos += v;
  }
  model.prior_ = pos / static_cast<double>(y.size());
  auto im = std::make_shared<TrainedModel::Impl>();
  if (pos == 0 || pos == static_cast<double>(y.size())) {
    model.degenerate_ = true;
    model.impl_ = im;
    return model;
  }
  switch (spec.kind) {
    case LearnerKind::RF:
      im->trees = fit_forest(x, y, spec.forest, spec.seed);
      break;
    case LearnerKind::LR:
      im->scaler = Scaler::fit(x);
      im->weights = fit_logistic(im->scaler.apply(x), y, spec.logistic);
      break;
    case LearnerKind::NN:
      im->scaler = Scaler::fit(x);
      fit_network(*im, im->scaler.apply(x), y, spec.network, spec.seed);
      break;
  }
  model.impl_ = im;
  return model;
}

std::vector<double> TrainedModel::predict_scores(const Matrix& x) const {
  if (x.rows() == 0) return {};
  if (x.cols() != features_)
    throw InvalidArgument("model expects " + std::to_string(features_) + " columns, got " + std::to_string(x.cols()));
  std::vector<double> scores(x.rows(), prior_);
  if (degenerate_) return scores;
  const auto& im = *impl_;
  switch (kind_) {
    case LearnerKind::RF:
      for (std::size_t r = 0; r < x.rows(); ++r) {
        double votes = 0;
        for (const auto& t : im.trees) votes += tree_vote(t, x.row(r));
        scores[r] = votes / static_cast<double>(im.trees.size());
      }
      break;
    case LearnerKind::LR: {
      const auto z = im.scaler.apply(x);
      for (std::size_t r = 0; r < z.rows(); ++r) {
        double s = im.weights[0];
        for (std::size_t c = 0; c < z.cols(); ++c) s += im.weights[c + 1] * z(r, c);
        scores[r] = sigmoid(s);
      }
      break;
    }
    case LearnerKind::NN: {
      const auto z = im.scaler.apply(x);
      const std::size_t d = z.cols();
      for (std::size_t r = 0; r < z.rows(); ++r) {
        double out = im.b2;
        for (std::size_t j = 0; j < im.hidden; ++j) {
          double s = im.b1[j];
          for (std::size_t c = 0; c < d; ++c) s += im.w1[j * d + c] * z(r, c);
          if (s > 0) out += im.w2[j] * s;
        }
        scores[r] = sigmoid(out);
      }
      break;
    }
  }
  for (auto& s : scores) s = std::clamp(s, 0.0, 1.0);
  return scores;
}

std::vector<double> TrainedModel::parameters() const {
  std::vector<double> p = {static_cast<double>(kind_), degenerate_ ? 1.0 : 0.0, prior_};
  if (!impl_) return p;
  const auto& im = *impl_;
  p.insert(p.end(), im.scaler.mean.begin(), im.scaler.mean.end());
  p.insert(p.end(), im.scaler.scale.begin(), im.scaler.scale.end());
  for (const auto& t : im.trees)
    for (const auto& n : t) p.insert(p.end(), {static_cast<double>(n.feature), n.threshold, n.vote});
  p.insert(p.end(), im.weights.begin(), im.weights.end());
  p.insert(p.end(), im.w1.begin(), im.w1.end());
  p.insert(p.end(), im.b1.begin(), im.b1.end());
  p.insert(p.end(), im.w2.begin(), im.w2.end());
  p.push_back(im.b2);
  return p;
}

// ---------------------------------------------------------------------------
// SMOTE

SmoteResult smote_balance(const Matrix& x, std::span<const int> y, int k, std::uint64_t seed) {
  if (x.rows() != y.size()) throw InvalidArgument("feature and label counts differ");
  if (k < 1) throw InvalidArgument("SMOTE needs k >= 1");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw InvalidArgument("SMOTE needs both classes present");
  SmoteResult out{x, {y.begin(), y.end()}, {}};
  if (pos.size() == neg.size()) return out;
  const bool minority_positive = pos.size() < neg.size();
  const auto& minority = minority_positive ? pos : neg;
  const std::size_t needed = (minority_positive ? neg.size() : pos.size()) - minority.size();
  const std::size_t m = minority.size();
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), m - 1);

  // k nearest minority neighbours of each minority row (ties by index).
  std::vector<std::vector<std::size_t>> neighbours(m);
  if (kk > 0) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t a = 0; a < m; ++a) {
      dist.clear();
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        double s = 0;
        const auto ra = x.row(minority[a]), rb = x.row(minority[b]);
        for (std::size_t c = 0; c < x.cols(); ++c) s += (ra[c] - rb[c]) * (ra[c] - rb[c]);
        dist.emplace_back(s, b);
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
      for (std::size_t i = 0; i < kk; ++i) neighbours[a].push_back(dist[i].second);
    }
  }
  Rng rng(seed);
  std::vector<double> row(x.cols());
  const int label = minority_positive ? 1 : 0;
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t a = rng.below(m);
    const std::size_t b = kk > 0 ? neighbours[a][rng.below(kk)] : a;
    const double u = rng.uniform();
    const auto ra = x.row(minority[a]), rb = x.row(minority[b]);
    for (std::size_t c = 0; c < x.cols(); ++c) row[c] = ra[c] + u * (rb[c] - ra[c]);
    out.x.append_row(row);
    out.y.push_back(label);
    out.origins.emplace_back(minority[a], minority[b]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CFS

double cfs_merit(std::span<const double> r_cf, std::span<const double> r_ff_pairs) {
  const double k = static_cast<double>(r_cf.size());
  if (k == 0) return 0;
  const double mean_cf = std::accumulate(r_cf.begin(), r_cf.end(), 0.0) / k;
  const double mean_ff =
      r_ff_pairs.empty() ? 0.0 : std::accumulate(r_ff_pairs.begin(), r_ff_pairs.end(), 0.0) / static_cast<double>(r_ff_pairs.size());
  const double den = std::sqrt(k + k * (k - 1) * mean_ff);
  return den > 0 ? k * mean_cf / den : 0.0;
}

std::vector<std::size_t> select_features_cfs(const Matrix& x, std::span<const int> y, int bins) {
  if (x.rows() != y.size()) throw InvalidArgument("feature and label counts differ");
  const std::size_t p = x.cols();
  if (p == 0) return {};
  std::vector<std::vector<int>> codes(p);
  std::vector<double> column(x.rows());
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t r = 0; r < x.rows(); ++r) column[r] = x(r, c);
    codes[c] = stats::equal_frequency_bins(std::span<const double>(column), bins);
  }
  const std::vector<int> labels(y.begin(), y.end());
  std::vector<double> r_cf(p);
  for (std::size_t c = 0; c < p; ++c) r_cf[c] = stats::symmetric_uncertainty(codes[c], labels);

  std::map<std::pair<std::size_t, std::size_t>, double> r_ff;
  auto ff = [&](std::size_t a, std::size_t b) {
    const auto key = std::minmax(a, b);
    const auto it = r_ff.find(key);
    if (it != r_ff.end()) return it->second;
    const double v = stats::symmetric_uncertainty(codes[a], codes[b]);
    r_ff.emplace(key, v);
    return v;
  };

  std::vector<std::size_t> selected;
  std::vector<bool> used(p, false);
  double sum_cf = 0, sum_ff = 0, merit = -1;
  while (selected.size() < p) {
    double best = -1;
    std::size_t best_c = p;
    double best_ff = 0;
    for (std::size_t c = 0; c < p; ++c) {
      if (used[c]) continue;
      double add_ff = 0;
      for (const auto s : selected) add_ff += ff(c, s);
      const double k = static_cast<double>(selected.size() + 1);
      const double pairs = k * (k - 1) / 2;
      const double mean_ff = pairs > 0 ? (sum_ff + add_ff) / pairs : 0.0;
      const double den = std::sqrt(k + k * (k - 1) * mean_ff);
      const double m = den > 0 ? (sum_cf + r_cf[c]) / den : 0.0;  // k * mean_cf == sum_cf
      if (m > best + 1e-12) {
        best = m;
        best_c = c;
        best_ff = add_ff;
      }
    }
    if (best_c == p) break;
    if (!selected.empty() && !(best > merit + 1e-12)) break;
    selected.push_back(best_c);
    used[best_c] = true;
    sum_cf += r_cf[best_c];
    sum_ff += best_ff;
    merit = best;
  }
  return selected;
}

}  // namespace tlp
