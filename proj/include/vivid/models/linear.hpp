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

#include <Eigen/Dense>

#include "vivid/predictor.hpp"

namespace vivid {

// Ordinary least squares with an intercept. Categorical features enter as
// treatment dummies (first level is the baseline). Rank-deficient designs
// get the minimum-norm solution.
class LinearModel final : public Predictor {
 public:
  LinearModel(const FeatureFrame& x, std::span<const double> y)
      : Predictor(names_of(x)), schema_(x.schema) {
    const std::size_t n = x.n_rows();
    if (n == 0 || y.size() != n) throw Error("linear fit: empty or mismatched data");
    const std::size_t p = design_width();
    Eigen::MatrixXd design(n, p);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = 0;
      design(i, c++) = 1.0;
      for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const double v = x.columns[j][i];
        if (schema_[j].kind == ColumnKind::numeric) {
          design(i, c++) = v;
        } else {
          for (std::size_t l = 1; l < schema_[j].levels.size(); ++l)
            design(i, c++) = (v == static_cast<double>(l)) ? 1.0 : 0.0;
        }
      }
    }
    Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    Eigen::VectorXd beta = design.completeOrthogonalDecomposition().solve(target);
    coef_.assign(beta.data(), beta.data() + beta.size());
  }

  PredictorKind kind() const override { return PredictorKind::builtin_linear; }

  // Intercept followed by one coefficient per design column.
  const std::vector<double>& coefficients() const { return coef_; }
  double intercept() const { return coef_.front(); }

 protected:
  std::vector<double> predict_unchecked(const FeatureFrame& batch) const override {
    std::vector<double> out(batch.n_rows(), coef_[0]);
    std::size_t c = 1;
    for (std::size_t j = 0; j < batch.n_cols(); ++j) {
      const auto& col = batch.columns[j];
      if (schema_[j].kind == ColumnKind::numeric) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coef_[c] * col[i];
        ++c;
      } else {
        const std::size_t levels = schema_[j].levels.size();
        for (std::size_t i = 0; i < out.size(); ++i) {
          const auto l = static_cast<std::size_t>(col[i]);
          if (l >= 1 && l < levels) out[i] += coef_[c + l - 1];
        }
        c += levels - 1;
      }
    }
    return out;
  }

 private:
  static std::vector<std::string> names_of(const FeatureFrame& x) {
    std::vector<std::string> names;
    for (const auto& s : x.schema) names.push_back(s.name);
    return names;
  }

  std::size_t design_width() const {
    std::size_t p = 1;
    for (const auto& s : schema_)
      p += s.kind == ColumnKind::numeric ? 1 : s.levels.size() - 1;
    return p;
  }

  std::vector<ColumnSchema> schema_;
  std::vector<double> coef_;
};

}  // namespace vivid
