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

#include "vivid/predictor.hpp"

namespace vivid {

// k-nearest-neighbour regression. Numeric features are standardized with the
// training mean and standard deviation; categorical features contribute 0/1.
// Distance ties go to the lower training row.
class KnnModel final : public Predictor {
 public:
  KnnModel(const FeatureFrame& x, std::span<const double> y, std::size_t k)
      : Predictor(names_of(x)), schema_(x.schema), train_(x), y_(y.begin(), y.end()), k_(k) {
    if (k_ < 1) throw Error("knn: k must be at least 1");
    if (x.n_rows() == 0 || y.size() != x.n_rows())
      throw Error("knn fit: empty or mismatched data");
    k_ = std::min(k_, x.n_rows());
    center_.assign(x.n_cols(), 0.0);
    scale_.assign(x.n_cols(), 1.0);
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
      if (schema_[j].kind != ColumnKind::numeric) continue;
      const auto& col = x.columns[j];
      double mean = 0.0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(col.size());
      double var = 0.0;
      for (double v : col) var += (v - mean) * (v - mean);
      var /= static_cast<double>(col.size());
      center_[j] = mean;
      scale_[j] = var > 0.0 ? std::sqrt(var) : 1.0;
      for (double& v : train_.columns[j]) v = (v - mean) / scale_[j];
    }
  }

  PredictorKind kind() const override { return PredictorKind::builtin_knn; }
  std::size_t k() const { return k_; }

 protected:
  std::vector<double> predict_unchecked(const FeatureFrame& batch) const override {
    const std::size_t n_train = train_.n_rows();
    std::vector<double> out(batch.n_rows());
    std::vector<std::pair<double, std::size_t>> dist(n_train);
    std::vector<double> q(batch.n_cols());
    std::vector<std::size_t> picked(k_);
    for (std::size_t i = 0; i < batch.n_rows(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        q[j] = batch.columns[j][i];
        if (schema_[j].kind == ColumnKind::numeric) q[j] = (q[j] - center_[j]) / scale_[j];
      }
      for (std::size_t t = 0; t < n_train; ++t) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
          const double tv = train_.columns[j][t];
          if (schema_[j].kind == ColumnKind::numeric) {
            const double diff = q[j] - tv;
            d2 += diff * diff;
          } else if (q[j] != tv) {
            d2 += 1.0;
          }
        }
        dist[t] = {d2, t};
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
      for (std::size_t m = 0; m < k_; ++m) picked[m] = dist[m].second;
      // Summing in training-row order makes k = n reproduce mean(y) exactly.
      std::sort(picked.begin(), picked.end());
      double acc = 0.0;
      for (auto t : picked) acc += y_[t];
      out[i] = acc / static_cast<double>(k_);
    }
    return out;
  }

 private:
  static std::vector<std::string> names_of(const FeatureFrame& x) {
    std::vector<std::string> names;
    for (const auto& s : x.schema) names.push_back(s.name);
    return names;
  }

  std::vector<ColumnSchema> schema_;
  FeatureFrame train_;
  std::vector<double> y_;
  std::size_t k_;
  std::vector<double> center_;
  std::vector<double> scale_;
};

}  // namespace vivid
