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

// Variable importance (permutation, RMSE increase) and pairwise interaction
// (Friedman's H on the grid cross), assembled into a ViviMatrix.

#include <string>
#include <vector>

#include "vivid/dataset.hpp"
#include "vivid/models/bagged_trees.hpp"
#include "vivid/pdp.hpp"
#include "vivid/predictor.hpp"
#include "vivid/seriation.hpp"
#include "vivid/vivi_matrix.hpp"

namespace vivid {

// RMSE(y, f(frame with column j permuted by perm)) - baseline.
inline double permuted_rmse_increase(const Predictor& p, const FeatureFrame& frame,
                                     std::span<const double> y, double baseline, std::size_t j,
                                     std::span<const std::size_t> perm) {
  FeatureFrame shuffled = frame;
  const auto& src = frame.columns[j];
  auto& dst = shuffled.columns[j];
  for (std::size_t i = 0; i < perm.size(); ++i) dst[i] = src[perm[i]];
  return rmse(y, p.predict(shuffled)) - baseline;
}

struct PermutationResult {
  std::vector<double> importance;               // per predictor
  std::vector<std::vector<double>> replicates;  // [predictor][replicate]
};

// Mean increase in RMSE over num_perm seeded permutations of each predictor.
inline PermutationResult permutation_importance(const Predictor& p, const Dataset& d,
                                                std::size_t num_perm, std::uint64_t seed,
                                                unsigned workers = 1) {
  if (num_perm < 1) throw Error("numPerm must be at least 1");
  const FeatureFrame frame = d.features();
  const auto y = p.target(d);
  const double baseline = rmse(y, p.predict(frame));
  const std::size_t m = frame.n_cols();
  PermutationResult out;
  out.replicates.assign(m, std::vector<double>(num_perm, 0.0));
  parallel_for(m * num_perm, workers, [&](std::size_t task) {
    const std::size_t j = task / num_perm, r = task % num_perm;
    Rng rng(derive_seed(seed, {0x7065726dULL, j, r}));
    const auto perm = random_permutation(frame.n_rows(), rng);
    out.replicates[j][r] = permuted_rmse_increase(p, frame, y, baseline, j, perm);
  });
  for (const auto& reps : out.replicates) {
    double acc = 0.0;
    for (double v : reps) acc += v;
    out.importance.push_back(acc / static_cast<double>(num_perm));
  }
  return out;
}

// H from uncentered PD values: f_a over grid A, f_b over grid B, f_ab over
// the cross (A slowest). All three are centered over the grid cells.
inline double h_from_pd(std::span<const double> f_a, std::span<const double> f_b,
                        std::span<const double> f_ab, bool normalized) {
  const std::size_t na = f_a.size(), nb = f_b.size(), cells = na * nb;
  if (f_ab.size() != cells) throw Error("H: surface sizes do not match");
  std::vector<double> ea(cells), eb(cells);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      ea[a * nb + b] = f_a[a];
      eb[a * nb + b] = f_b[b];
    }
  const double m_ab = shifted_mean(f_ab), m_a = shifted_mean(ea), m_b = shifted_mean(eb);
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double joint = f_ab[c] - m_ab;
    const double r = joint - (ea[c] - m_a) - (eb[c] - m_b);
    num += r * r;
    den += joint * joint;
  }
  if (normalized) return den == 0.0 ? 0.0 : num / den;
  return std::sqrt(num / static_cast<double>(cells));
}

struct HOptions {
  std::size_t grid_size = kDefaultGridSize;
  std::size_t nmax = kDefaultNmax;
  std::uint64_t seed = 0;
  bool normalized = false;
  unsigned workers = 1;
};

inline double h_statistic(const Predictor& p, const Dataset& d, std::string_view var_a,
                          std::string_view var_b, const HOptions& opts = {}) {
  if (var_a == var_b) throw Error("H needs two distinct variables");
  // Canonical pair order keeps H(A, B) and H(B, A) bit-identical.
  if (d.predictor_index(var_a) > d.predictor_index(var_b)) std::swap(var_a, var_b);
  const Grid1D ga = make_grid(d, var_a, opts.grid_size);
  const Grid1D gb = make_grid(d, var_b, opts.grid_size);
  const auto retained = sample_indices(d.n_rows(), SampleSpec{opts.nmax, opts.seed});
  const FeatureFrame frame = d.features(retained);
  const Grid1D* one_a[] = {&ga};
  const Grid1D* one_b[] = {&gb};
  const Grid1D* both[] = {&ga, &gb};
  const auto f_a = pd_values(p, frame, one_a, opts.workers);
  const auto f_b = pd_values(p, frame, one_b, opts.workers);
  const auto f_ab = pd_values(p, frame, both, opts.workers);
  return h_from_pd(f_a, f_b, f_ab, opts.normalized);
}

struct ViviOptions {
  std::size_t grid_size = kDefaultGridSize;
  std::size_t nmax = kDefaultNmax;
  std::size_t num_perm = kDefaultNumPerm;
  bool normalized = false;
  std::string importance_type = "agnostic";
  std::uint64_t seed = 0;
  bool reorder = false;
  unsigned workers = 1;
};

namespace detail {

inline const BaggedTrees* find_trees(const Predictor& p) {
  if (const auto* t = dynamic_cast<const BaggedTrees*>(&p)) return t;
  if (const auto* w = dynamic_cast<const ClassWrapper*>(&p)) return find_trees(*w->inner());
  return nullptr;
}

}  // namespace detail

inline void validate(const ViviOptions& o) {
  if (o.grid_size < 1) throw Error("gridSize must be at least 1");
  if (o.nmax < 1) throw Error("nmax must be at least 1");
  if (o.num_perm < 1) throw Error("numPerm must be at least 1");
  if (o.workers < 1) throw Error("workers must be at least 1");
  if (o.importance_type != "agnostic" && o.importance_type != "impurity")
    throw Error("importanceType must be 'agnostic' or 'impurity', got '" + o.importance_type + "'");
}

inline ViviMatrix compute(const Predictor& p, const Dataset& d, const ViviOptions& opts = {}) {
  validate(opts);
  const auto vars = d.predictor_names();
  if (vars != p.feature_names())
    throw Error("predictor features do not match the dataset predictors");
  const BaggedTrees* trees = nullptr;
  if (opts.importance_type == "impurity") {
    trees = detail::find_trees(p);
    if (!trees) throw Error("impurity importance requires a bagged-trees predictor");
  }

  const std::size_t m = vars.size();
  ViviMatrix out = ViviMatrix::zeros(vars);
  out.importance_type = opts.importance_type;
  out.normalized = opts.normalized;
  out.meta.grid_size = opts.grid_size;
  out.meta.nmax = opts.nmax;
  out.meta.num_perm = opts.num_perm;
  out.meta.seed = opts.seed;

  // One subsample serves importance and interaction alike.
  const auto retained = sample_indices(d.n_rows(), SampleSpec{opts.nmax, opts.seed});
  const Dataset sampled = retained.size() == d.n_rows() ? d : d.subset(retained);

  if (trees) {
    const auto& imp = trees->impurity_importance();
    for (std::size_t j = 0; j < m; ++j) out.values[j][j] = imp[j];
  } else {
    auto perm = permutation_importance(p, sampled, opts.num_perm, opts.seed, opts.workers);
    for (std::size_t j = 0; j < m; ++j) out.values[j][j] = perm.importance[j];
    out.meta.perm_replicates = std::move(perm.replicates);
  }

  std::vector<Grid1D> grids;
  for (const auto& v : vars) grids.push_back(make_grid(d, v, opts.grid_size));
  const FeatureFrame frame = sampled.features();

  std::vector<std::vector<double>> one_d(m);
  parallel_for(m, opts.workers, [&](std::size_t j) {
    const Grid1D* g[] = {&grids[j]};
    one_d[j] = pd_values(p, frame, g, 1);
  });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) pairs.emplace_back(a, b);
  std::vector<double> h(pairs.size());
  parallel_for(pairs.size(), opts.workers, [&](std::size_t k) {
    const auto [a, b] = pairs[k];
    const Grid1D* g[] = {&grids[a], &grids[b]};
    h[k] = h_from_pd(one_d[a], one_d[b], pd_values(p, frame, g, 1), opts.normalized);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    out.values[a][b] = out.values[b][a] = h[k];
  }
  return opts.reorder ? reorder(out) : out;
}

// Number of unordered predictor pairs compute() evaluates.
inline std::size_t pair_count(std::size_t m) { return m * (m - 1) / 2; }

}  // namespace vivid
