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


#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

using testing_support::numeric_dataset;
using testing_support::predictor_for;
using testing_support::rel_close;
namespace oracle = testing_support::oracle;

TEST(PermutationImportance, UnusedVariableIsExactlyZero) {
  const auto d = testing_support::uniform_dataset(40, 3, 2, [](const auto& x) { return x[0] + x[2]; });
  const auto p = predictor_for(d, [](const auto& x) { return 2 * x[0] - x[2] * x[0]; });
  const auto r = vivid::permutation_importance(*p, d, 4, 11);
  EXPECT_EQ(r.importance[1], 0.0);
  EXPECT_GT(r.importance[0], 0.0);
  ASSERT_EQ(r.replicates.size(), 3u);
  for (const auto& reps : r.replicates) EXPECT_EQ(reps.size(), 4u);
}

TEST(PermutationImportance, HandPermutedLinearFit) {
  const auto d = numeric_dataset({"x", "y"}, {{1, 1}, {2, 2}, {3, 3}});
  const auto p = predictor_for(d, [](const auto& x) { return x[0]; });
  const auto frame = d.features();
  const std::vector<std::size_t> perm = {2, 0, 1};  // x becomes (3, 1, 2)
  const double inc = vivid::permuted_rmse_increase(*p, frame, d.response_values(), 0.0, 0, perm);
  EXPECT_NEAR(inc, std::sqrt(2.0), 1e-15);
}

TEST(PermutationImportance, ReplicatesAreIndependentAndSeeded) {
  const auto d = testing_support::uniform_dataset(30, 2, 5, [](const auto& x) { return x[0] + x[1]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[0] + x[1]; });
  const auto a = vivid::permutation_importance(*p, d, 4, 1);
  const auto b = vivid::permutation_importance(*p, d, 4, 1);
  const auto c = vivid::permutation_importance(*p, d, 4, 2);
  EXPECT_EQ(a.replicates, b.replicates);
  EXPECT_NE(a.replicates, c.replicates);
  EXPECT_NE(a.replicates[0][0], a.replicates[0][1]);
  EXPECT_THROW(vivid::permutation_importance(*p, d, 0, 1), vivid::Error);
}

TEST(HStatistic, AdditiveOracleIsZero) {
  const auto d = testing_support::uniform_dataset(50, 2, 8, [](const auto& x) { return x[0] + x[1]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[0] + x[1]; });
  for (bool normalized : {false, true}) {
    vivid::HOptions o;
    o.grid_size = 10;
    o.normalized = normalized;
    EXPECT_LE(vivid::h_statistic(*p, d, "x1", "x2", o), 1e-9);
  }
}

TEST(HStatistic, UnusedVariableIsExactlyZero) {
  const auto d = testing_support::uniform_dataset(30, 3, 8, [](const auto& x) { return x[0]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[0] * x[2] + std::sin(x[2]); });
  vivid::HOptions o;
  o.grid_size = 7;
  EXPECT_EQ(vivid::h_statistic(*p, d, "x1", "x2", o), 0.0);
  EXPECT_EQ(vivid::h_statistic(*p, d, "x2", "x3", o), 0.0);
  EXPECT_GT(vivid::h_statistic(*p, d, "x1", "x3", o), 0.0);
}

TEST(HStatistic, ProductOnFullGridMatchesOracle) {
  testing_support::Rows rows;
  for (double a : {-1.0, 0.0, 1.0})
    for (double b : {-1.0, 0.0, 1.0}) rows.push_back({a, b, a * b});
  const auto d = numeric_dataset({"x1", "x2", "y"}, rows);
  const testing_support::RowFn f = [](const auto& x) { return x[0] * x[1]; };
  const auto p = predictor_for(d, f);
  const std::vector<double> g = {-1, 0, 1};
  const auto feat = testing_support::feature_rows(d);
  for (bool normalized : {false, true}) {
    vivid::HOptions o;
    o.grid_size = 3;
    o.normalized = normalized;
    const double want = oracle::h(f, feat, 0, g, 1, g, normalized);
    EXPECT_TRUE(rel_close(vivid::h_statistic(*p, d, "x1", "x2", o), want, 1e-12));
  }
  // The product has no additive part on the symmetric grid.
  EXPECT_NEAR(vivid::h_statistic(*p, d, "x1", "x2", {.grid_size = 3, .normalized = true}), 1.0, 1e-12);
}

TEST(HStatistic, SymmetricAndBounded) {
  const auto d = testing_support::uniform_dataset(40, 3, 4, [](const auto& x) { return x[0]; });
  const auto p = predictor_for(d, [](const auto& x) { return std::exp(x[0] * x[1]) + x[2] * x[0]; });
  for (bool normalized : {false, true}) {
    vivid::HOptions o;
    o.grid_size = 6;
    o.normalized = normalized;
    const double ab = vivid::h_statistic(*p, d, "x1", "x2", o);
    EXPECT_EQ(ab, vivid::h_statistic(*p, d, "x2", "x1", o));
    EXPECT_GE(ab, 0.0);
    if (normalized) {
      EXPECT_LE(ab, 1.0 + 1e-9);
    }
  }
  EXPECT_THROW(vivid::h_statistic(*p, d, "x1", "x1"), vivid::Error);
}

TEST(Compute, MatchesOraclesOnSmallFixtures) {
  const std::vector<testing_support::RowFn> fns = {
      [](const auto& x) { return x[0] * x[1] + x.back(); },
      [](const auto& x) { return std::sin(3 * x[0]) * x.back() - x[1] * x[1]; },
  };
  for (const auto& f : fns)
    for (std::size_t n : {3u, 7u, 10u})
      for (std::size_t m : {2u, 3u})
        for (std::size_t g : {2u, 5u}) {
          const auto d = testing_support::uniform_dataset(n, m, 100 * n + m, [](const auto& x) { return x[0] * 2; });
          const auto p = predictor_for(d, f);
          vivid::ViviOptions o;
          o.grid_size = g;
          o.num_perm = 3;
          o.seed = 19;
          const auto v = vivid::compute(*p, d, o);
          const auto rows = testing_support::feature_rows(d);
          const auto y = d.response_values();
          const std::vector<double> yv(y.begin(), y.end());
          for (std::size_t j = 0; j < m; ++j) {
            double acc = 0;
            for (std::size_t r = 0; r < 3; ++r) {
              vivid::Rng rng(vivid::derive_seed(19, {0x7065726dULL, j, r}));
              acc += oracle::permuted_increase(f, rows, yv, j, vivid::random_permutation(n, rng));
            }
            EXPECT_TRUE(rel_close(v.importance(j), acc / 3.0, 1e-12)) << "n=" << n << " m=" << m;
            for (std::size_t k = j + 1; k < m; ++k) {
              const auto col_j = d.values(j), col_k = d.values(k);
              const auto [lj, hj] = std::minmax_element(col_j.begin(), col_j.end());
              const auto [lk, hk] = std::minmax_element(col_k.begin(), col_k.end());
              const double want =
                  oracle::h(f, rows, j, oracle::grid(*lj, *hj, g), k, oracle::grid(*lk, *hk, g), false);
              EXPECT_TRUE(rel_close(v.interaction(j, k), want, 1e-12)) << "n=" << n << " m=" << m;
            }
          }
        }
}

TEST(Compute, TwoPredictorAdditive) {
  const auto d = testing_support::uniform_dataset(30, 2, 6, [](const auto& x) { return 3 * x[0] + x[1]; });
  const auto p = predictor_for(d, [](const auto& x) { return 3 * x[0] + x[1]; });
  vivid::ViviOptions o;
  o.grid_size = 8;
  o.seed = 2;
  const auto v = vivid::compute(*p, d, o);
  EXPECT_LE(v.interaction(0, 1), 1e-9);
  const auto perm = vivid::permutation_importance(*p, d, 4, 2);
  EXPECT_EQ(v.importance(0), perm.importance[0]);
  EXPECT_EQ(v.importance(1), perm.importance[1]);
  EXPECT_EQ(v.meta.perm_replicates, perm.replicates);
}

TEST(Compute, DefaultsAndMeta) {
  const vivid::ViviOptions o;
  EXPECT_EQ(o.grid_size, 50u);
  EXPECT_EQ(o.nmax, 500u);
  EXPECT_EQ(o.num_perm, 4u);
  EXPECT_FALSE(o.normalized);
  EXPECT_EQ(o.importance_type, "agnostic");
  const auto d = testing_support::uniform_dataset(20, 3, 6, [](const auto& x) { return x[0]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[0] * x[1]; });
  const auto v = vivid::compute(*p, d, {.grid_size = 4, .seed = 9});
  EXPECT_EQ(v.meta.grid_size, 4u);
  EXPECT_EQ(v.meta.nmax, 500u);
  EXPECT_EQ(v.meta.num_perm, 4u);
  EXPECT_EQ(v.meta.seed, 9u);
  EXPECT_EQ(v.vars, d.predictor_names());
  v.validate();
}

TEST(Compute, DeterministicAndScheduleIndependent) {
  const auto d = testing_support::uniform_dataset(80, 4, 6, [](const auto& x) { return x[0] * x[1] + x[2]; });
  const auto p = vivid::fit_builtin(vivid::BuiltinKind::knn, d);
  vivid::ViviOptions o;
  o.grid_size = 6;
  o.seed = 5;
  const auto a = vivid::compute(*p, d, o);
  const auto b = vivid::compute(*p, d, o);
  o.workers = 7;
  const auto c = vivid::compute(*p, d, o);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Compute, SubsamplesOnceWithNmax) {
  const auto d = testing_support::uniform_dataset(60, 2, 6, [](const auto& x) { return x[0] * x[1]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[0] * x[1]; });
  vivid::ViviOptions o;
  o.grid_size = 5;
  o.nmax = 20;
  o.seed = 3;
  const auto v = vivid::compute(*p, d, o);
  const auto kept = vivid::sample_indices(60, {20, 3});
  const auto sub = d.subset(kept);
  const auto perm = vivid::permutation_importance(*p, sub, 4, 3);
  EXPECT_EQ(v.importance(0), perm.importance[0]);
  EXPECT_EQ(v.interaction(0, 1), vivid::h_statistic(*p, d, "x1", "x2", {.grid_size = 5, .nmax = 20, .seed = 3}));
}

TEST(Compute, BostonShapeAndPairCount) {
  const auto d = vivid::load_csv(std::string(VIVID_SOURCE_DIR) + "/data/boston.csv", "medv");
  const auto p = vivid::fit_builtin(vivid::BuiltinKind::linear, d);
  const auto v = vivid::compute(*p, d, {.grid_size = 3, .nmax = 60, .num_perm = 1});
  EXPECT_EQ(v.size(), 13u);
  EXPECT_EQ(vivid::pair_count(v.size()), 78u);
  // A linear model has no interactions at all.
  for (std::size_t i = 0; i < 13; ++i)
    for (std::size_t j = 0; j < 13; ++j)
      if (i != j) {
        EXPECT_LE(v.interaction(i, j), 1e-9);
      }
}

TEST(Compute, ReorderFlagAppliesSeriation) {
  const auto d = testing_support::uniform_dataset(30, 3, 6, [](const auto& x) { return x[0]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[2] * 5 + x[1] * x[2]; });
  vivid::ViviOptions o;
  o.grid_size = 5;
  const auto plain = vivid::compute(*p, d, o);
  o.reorder = true;
  EXPECT_EQ(vivid::compute(*p, d, o), vivid::reorder(plain));
}

TEST(Compute, ImpurityImportance) {
  const auto d = testing_support::uniform_dataset(60, 3, 6, [](const auto& x) { return 4 * x[0] + x[1]; });
  const auto trees = vivid::fit_builtin(vivid::BuiltinKind::bagged_trees, d, {.trees = {.n_trees = 10}});
  vivid::ViviOptions o;
  o.grid_size = 4;
  o.importance_type = "impurity";
  const auto v = vivid::compute(*trees, d, o);
  const auto& imp = dynamic_cast<const vivid::BaggedTrees&>(*trees).impurity_importance();
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(v.importance(j), imp[j]);
  EXPECT_EQ(v.importance_type, "impurity");
  EXPECT_TRUE(v.meta.perm_replicates.empty());
  const auto knn = vivid::fit_builtin(vivid::BuiltinKind::knn, d);
  EXPECT_THROW(vivid::compute(*knn, d, o), vivid::Error);
}

TEST(Compute, InvalidOptions) {
  const auto d = testing_support::uniform_dataset(10, 2, 6, [](const auto& x) { return x[0]; });
  const auto p = predictor_for(d, [](const auto& x) { return x[0]; });
  EXPECT_THROW(vivid::compute(*p, d, {.grid_size = 0}), vivid::Error);
  EXPECT_THROW(vivid::compute(*p, d, {.nmax = 0}), vivid::Error);
  EXPECT_THROW(vivid::compute(*p, d, {.num_perm = 0}), vivid::Error);
  EXPECT_THROW(vivid::compute(*p, d, {.importance_type = "gain"}), vivid::Error);
  EXPECT_THROW(vivid::compute(*p, d, {.workers = 0}), vivid::Error);
  const auto other = testing_support::uniform_dataset(10, 3, 6, [](const auto& x) { return x[0]; });
  EXPECT_THROW(vivid::compute(*p, other), vivid::Error);
}

TEST(ViviMatrix, ValidateRejectsBadMatrices) {
  auto v = vivid::ViviMatrix::zeros({"a", "b"});
  v.validate();
  auto asym = v;
  asym.values[0][1] = 1;
  EXPECT_THROW(asym.validate(), vivid::Error);
  auto neg = v;
  neg.values[0][1] = neg.values[1][0] = -0.1;
  EXPECT_THROW(neg.validate(), vivid::Error);
  auto big = v;
  big.normalized = true;
  big.values[0][1] = big.values[1][0] = 1.5;
  EXPECT_THROW(big.validate(), vivid::Error);
  EXPECT_THROW(vivid::ViviMatrix::zeros({"a", "a"}).validate(), vivid::Error);
  auto nan = v;
  nan.values[0][0] = std::nan("");
  EXPECT_THROW(nan.validate(), vivid::Error);
}

TEST(ImportExternal, FillsSymmetrically) {
  const auto v = vivid::import_external({{"a", 1}, {"b", 2}}, {{"a", "b", 0.5}});
  EXPECT_EQ(v.values, (std::vector<std::vector<double>>{{1, 0.5}, {0.5, 2}}));
  EXPECT_EQ(v.importance_type, "external");
  const auto none = vivid::import_external({{"a", 1}, {"b", 2}, {"c", 3}}, {});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) {
        EXPECT_EQ(none.values[i][j], 0.0);
      }
}

TEST(ImportExternal, Errors) {
  EXPECT_THROW(vivid::import_external({{"a", 1}, {"b", 2}}, {{"a", "b", 0.5}, {"b", "a", 0.7}}), vivid::Error);
  EXPECT_NO_THROW(vivid::import_external({{"a", 1}, {"b", 2}}, {{"a", "b", 0.5}, {"b", "a", 0.5}}));
  EXPECT_THROW(vivid::import_external({{"a", 1}}, {{"a", "z", 0.5}}), vivid::Error);
  EXPECT_THROW(vivid::import_external({{"a", 1}, {"a", 2}}, {}), vivid::Error);
  EXPECT_THROW(vivid::import_external({{"a", 1}, {"b", 2}}, {{"a", "a", 0.5}}), vivid::Error);
}

TEST(LongTable, ColumnMajorRows) {
  auto v = vivid::ViviMatrix::zeros({"lstat", "nox"});
  v.values = {{4.8, 0.06}, {0.06, 1.2}};
  const auto rows = vivid::as_long_table(v);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (vivid::LongRow{"lstat", "lstat", 4.8, vivid::Measure::Vimp, 1, 1}));
  EXPECT_EQ(rows[1], (vivid::LongRow{"nox", "lstat", 0.06, vivid::Measure::Vint, 2, 1}));
  EXPECT_EQ(rows[2], (vivid::LongRow{"lstat", "nox", 0.06, vivid::Measure::Vint, 1, 2}));
  EXPECT_EQ(rows[3], (vivid::LongRow{"nox", "nox", 1.2, vivid::Measure::Vimp, 2, 2}));
  for (const auto& r : rows) EXPECT_EQ(r.measure == vivid::Measure::Vimp, r.row == r.col);
}

TEST(LongTable, SingleVariableAndRoundTrip) {
  auto one = vivid::ViviMatrix::zeros({"a"});
  one.values[0][0] = 3;
  const auto rows = vivid::as_long_table(one);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].measure, vivid::Measure::Vimp);

  const auto v = vivid::import_external({{"a", 1}, {"b", 2}, {"c", 0.25}}, {{"a", "c", 0.5}, {"b", "c", 1.5}});
  const auto back = vivid::from_long_table(vivid::as_long_table(v));
  EXPECT_EQ(back.vars, v.vars);
  EXPECT_EQ(back.values, v.values);
}

}  // namespace
