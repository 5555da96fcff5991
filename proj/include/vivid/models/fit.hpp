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

#include <memory>

#include "vivid/models/bagged_trees.hpp"
#include "vivid/models/knn.hpp"
#include "vivid/models/linear.hpp"

namespace vivid {

enum class BuiltinKind { linear, knn, bagged_trees };

struct FitOptions {
  std::size_t knn_k = 5;
  TreeParams trees;
  // Binary categorical responses are fit as the 0/1 indicator of this level
  // (first level when empty).
  std::string positive_class;
};

// Numeric training target for `d`'s response.
inline std::vector<double> training_target(const Dataset& d, const std::string& positive_class) {
  const auto& col = d.column(d.response());
  auto y = d.response_values();
  if (col.kind == ColumnKind::numeric) return {y.begin(), y.end()};
  if (col.levels.size() != 2)
    throw Error("unsupported response type: categorical response '" + col.name + "' has " +
                std::to_string(col.levels.size()) + " levels (need numeric or binary)");
  const std::string& pos = positive_class.empty() ? col.levels.front() : positive_class;
  auto it = std::find(col.levels.begin(), col.levels.end(), pos);
  if (it == col.levels.end()) throw Error("positive class '" + pos + "' is not a response level");
  const double code = static_cast<double>(it - col.levels.begin());
  std::vector<double> out;
  for (double v : y) out.push_back(v == code ? 1.0 : 0.0);
  return out;
}

inline PredictorPtr fit_builtin(BuiltinKind kind, const Dataset& d, const FitOptions& opts = {}) {
  const auto x = d.features();
  if (x.n_cols() == 0) throw Error("dataset has no predictors");
  const auto y = training_target(d, opts.positive_class);
  switch (kind) {
    case BuiltinKind::linear:
      return std::make_shared<const LinearModel>(x, y);
    case BuiltinKind::knn:
      return std::make_shared<const KnnModel>(x, y, opts.knn_k);
    case BuiltinKind::bagged_trees:
      return std::make_shared<const BaggedTrees>(x, y, opts.trees);
  }
  throw Error("unknown builtin model kind");
}

}  // namespace vivid
