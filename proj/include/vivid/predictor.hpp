/*
 * Copyright 2026 The vivid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vivid/common.hpp"
#include "vivid/dataset.hpp"

namespace vivid {

enum class PredictorKind {
  builtin_linear,
  builtin_knn,
  builtin_bagged_trees,
  external_subprocess,
  custom,
  class_wrapper,
};

// One substituted column of a partial-dependence grid.
struct GridAxis {
  std::size_t column = 0;  // index into the frame's columns
  std::vector<double> values;
};

inline std::size_t grid_cell_count(std::span<const GridAxis> axes) {
  std::size_t cells = 1;
  for (const auto& a : axes) cells *= a.values.size();
  return cells;
}

// Anything that maps a batch of feature rows to one number per row.
// Implementations must be safe to call concurrently.
class Predictor {
 public:
  explicit Predictor(std::vector<std::string> feature_names)
      : feature_names_(std::move(feature_names)) {
    if (feature_names_.empty()) throw Error("predictor needs at least one feature");
    std::set<std::string> seen(feature_names_.begin(), feature_names_.end());
    if (seen.size() != feature_names_.size())
      throw Error("predictor feature names must be unique");
  }
  virtual ~Predictor() = default;

  virtual PredictorKind kind() const = 0;

  // Predictions for every row of `batch`, whose columns must follow
  // feature_names().
  std::vector<double> predict(const FeatureFrame& batch) const {
    check_batch(batch);
    auto out = predict_unchecked(batch);
    if (out.size() != batch.n_rows())
      throw Error("predictor returned " + std::to_string(out.size()) +
                  " predictions for " + std::to_string(batch.n_rows()) + " rows");
    for (double v : out)
      if (!std::isfinite(v)) throw Error("predictor returned a non-finite prediction");
    return out;
  }

  const std::vector<std::string>& feature_names() const { return feature_names_; }

  // Values predictions are scored against (error metrics, RMSE).
  virtual std::vector<double> target(const Dataset& d) const {
    const auto& col = d.column(d.response());
    if (col.kind != ColumnKind::numeric)
      throw Error("response '" + d.response() +
                  "' is categorical; wrap the predictor for classification");
    auto v = d.response_values();
    return {v.begin(), v.end()};
  }

  // Mean prediction over the rows of `base` for every cell of the grid cross
  // of `axes` (first axis varies slowest). Each cell's mean sums rows in
  // order; work is partitioned by cell, never by row.
  virtual std::vector<double> grid_means(const FeatureFrame& base,
                                         std::span<const GridAxis> axes,
                                         unsigned workers) const {
    check_batch(base);
    const std::size_t cells = grid_cell_count(axes);
    std::vector<double> out(cells, 0.0);
    const std::size_t slots = std::max<std::size_t>(1, std::min<std::size_t>(workers, cells));
    parallel_for(slots, static_cast<unsigned>(slots), [&](std::size_t slot) {
      FeatureFrame frame = base;
      for (std::size_t cell = slot; cell < cells; cell += slots) {
        std::size_t rem = cell;
        for (std::size_t k = axes.size(); k-- > 0;) {
          const auto& axis = axes[k];
          const double v = axis.values[rem % axis.values.size()];
          rem /= axis.values.size();
          std::fill(frame.columns[axis.column].begin(), frame.columns[axis.column].end(), v);
        }
        const auto preds = predict(frame);
        double acc = 0.0;
        for (double p : preds) acc += p;
        out[cell] = acc / static_cast<double>(preds.size());
      }
    });
    return out;
  }

 protected:
  virtual std::vector<double> predict_unchecked(const FeatureFrame& batch) const = 0;

  void check_batch(const FeatureFrame& batch) const {
    if (batch.schema.size() != feature_names_.size())
      throw Error("batch has " + std::to_string(batch.schema.size()) +
                  " columns, predictor expects " + std::to_string(feature_names_.size()));
    for (std::size_t j = 0; j < feature_names_.size(); ++j)
      if (batch.schema[j].name != feature_names_[j])
        throw Error("batch column " + std::to_string(j) + " is '" + batch.schema[j].name +
                    "', predictor expects '" + feature_names_[j] + "'");
  }

 private:
  std::vector<std::string> feature_names_;
};

using PredictorPtr = std::shared_ptr<const Predictor>;

// In-process predictor over a row function; the analogue of a user-supplied
// predict function. Rows arrive as one value per feature.
class FunctionPredictor final : public Predictor {
 public:
  using RowFn = std::function<double(std::span<const double>)>;

  FunctionPredictor(std::vector<std::string> feature_names, RowFn fn)
      : Predictor(std::move(feature_names)), fn_(std::move(fn)) {}

  PredictorKind kind() const override { return PredictorKind::custom; }

 protected:
  std::vector<double> predict_unchecked(const FeatureFrame& batch) const override {
    std::vector<double> out(batch.n_rows());
    std::vector<double> row(batch.n_cols());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = batch.columns[j][i];
      out[i] = fn_(row);
    }
    return out;
  }

 private:
  RowFn fn_;
};

enum class Task { regression, binary_classification };

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Regression: pass-through. Classification: the inner output is read as
// P(positive_class), clamped to [eps, 1-eps] and mapped to the logit scale.
class ClassWrapper final : public Predictor {
 public:
  ClassWrapper(PredictorPtr inner, Task task, std::string positive_class = {},
               double eps = kDefaultEps)
      : Predictor(inner->feature_names()),
        inner_(std::move(inner)),
        task_(task),
        positive_class_(std::move(positive_class)),
        eps_(eps) {
    if (!(eps_ > 0.0 && eps_ < 0.5)) throw Error("eps must lie in (0, 0.5)");
    if (task_ == Task::binary_classification && positive_class_.empty())
      throw Error("classification requires a positive class");
  }

  PredictorKind kind() const override { return PredictorKind::class_wrapper; }
  Task task() const { return task_; }
  const std::string& positive_class() const { return positive_class_; }
  double eps() const { return eps_; }
  const PredictorPtr& inner() const { return inner_; }

  double transform(double p) const {
    if (task_ == Task::regression) return p;
    return logit(std::clamp(p, eps_, 1.0 - eps_));
  }

  std::vector<double> target(const Dataset& d) const override {
    if (task_ == Task::regression) return inner_->target(d);
    const auto& col = d.column(d.response());
    if (col.kind != ColumnKind::categorical)
      throw Error("classification requires a categorical response");
    auto it = std::find(col.levels.begin(), col.levels.end(), positive_class_);
    if (it == col.levels.end())
      throw Error("positive class '" + positive_class_ + "' is not a response level");
    const double code = static_cast<double>(it - col.levels.begin());
    std::vector<double> y;
    for (double v : d.response_values()) y.push_back(transform(v == code ? 1.0 : 0.0));
    return y;
  }

  std::vector<double> grid_means(const FeatureFrame& base, std::span<const GridAxis> axes,
                                 unsigned workers) const override {
    if (task_ == Task::regression) return inner_->grid_means(base, axes, workers);
    return Predictor::grid_means(base, axes, workers);
  }

 protected:
  std::vector<double> predict_unchecked(const FeatureFrame& batch) const override {
    auto p = inner_->predict(batch);
    if (task_ == Task::binary_classification)
      for (double& v : p) v = transform(v);
    return p;
  }

 private:
  PredictorPtr inner_;
  Task task_;
  std::string positive_class_;
  double eps_;
};

// Checks `positive_class` against the response levels of `d` when classifying.
inline std::shared_ptr<const ClassWrapper> wrap_class(PredictorPtr p, Task task,
                                                      const Dataset& d,
                                                      std::string positive_class = {},
                                                      double eps = kDefaultEps) {
  if (task == Task::binary_classification) {
    const auto& col = d.column(d.response());
    if (col.kind != ColumnKind::categorical || col.levels.size() != 2)
      throw Error("classification requires a binary categorical response");
    if (positive_class.empty()) positive_class = col.levels.front();
    if (std::find(col.levels.begin(), col.levels.end(), positive_class) == col.levels.end())
      throw Error("positive class '" + positive_class + "' is not a response level");
  }
  return std::make_shared<const ClassWrapper>(std::move(p), task, std::move(positive_class), eps);
}

}  // namespace vivid
