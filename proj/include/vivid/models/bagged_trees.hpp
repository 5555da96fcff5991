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

#include <cstdint>
#include <numeric>

#include "vivid/predictor.hpp"

namespace vivid {

struct TreeParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 8;
  std::size_t min_leaf = 5;
  std::uint64_t seed = 1;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  bool categorical = false;
  // Numeric: x <= threshold goes left. Categorical: x == threshold goes left.
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  template <typename Get>
  double leaf_value(Get&& get) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
      const auto& node = nodes[at];
      const double v = get(static_cast<std::size_t>(node.feature));
      const bool left = node.categorical ? v == node.threshold : v <= node.threshold;
      at = static_cast<std::size_t>(left ? node.left : node.right);
    }
    return nodes[at].value;
  }
};

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const FeatureFrame& x, std::span<const double> y, const TreeParams& params,
              std::vector<double>& importance)
      : x_(x), y_(y), params_(params), importance_(importance) {}

  RegressionTree build(std::vector<std::size_t> sample) {
    RegressionTree tree;
    tree_ = &tree;
    grow(sample, 0);
    return tree;
  }

 private:
  struct Split {
    double gain = 0.0;
    std::int32_t feature = -1;
    bool categorical = false;
    double threshold = 0.0;
  };

  std::int32_t grow(std::vector<std::size_t>& idx, std::size_t depth) {
    const std::size_t n = idx.size();
    double shift = 0.0;
    for (auto i : idx) shift += y_[i] - y_[idx[0]];
    const double mean = y_[idx[0]] + shift / static_cast<double>(n);
    double sse = 0.0;
    for (auto i : idx) sse += (y_[i] - mean) * (y_[i] - mean);

    const auto self = static_cast<std::int32_t>(tree_->nodes.size());
    tree_->nodes.push_back(TreeNode{});
    tree_->nodes[self].value = mean;

    if (depth >= params_.max_depth || n < 2 * params_.min_leaf || sse <= 0.0) return self;
    const Split best = find_split(idx, mean, sse);
    if (best.feature < 0) return self;

    std::vector<std::size_t> left, right;
    const auto& col = x_.columns[static_cast<std::size_t>(best.feature)];
    for (auto i : idx) {
      const bool go_left = best.categorical ? col[i] == best.threshold : col[i] <= best.threshold;
      (go_left ? left : right).push_back(i);
    }
    importance_[static_cast<std::size_t>(best.feature)] += best.gain;
    idx.clear();
    idx.shrink_to_fit();

    const auto l = grow(left, depth + 1);
    const auto r = grow(right, depth + 1);
    auto& node = tree_->nodes[self];
    node.feature = best.feature;
    node.categorical = best.categorical;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return self;
  }

  // Columns in order, thresholds in ascending order; only a strictly larger
  // gain replaces the incumbent.
  Split find_split(const std::vector<std::size_t>& idx, double mean, double sse) const {
    Split best;
    const std::size_t n = idx.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_leaf);
    const double min_gain = 1e-12 * sse;
    std::vector<std::pair<double, double>> xy(n);
    for (std::size_t j = 0; j < x_.n_cols(); ++j) {
      const auto& col = x_.columns[j];
      if (x_.schema[j].kind == ColumnKind::numeric) {
        for (std::size_t k = 0; k < n; ++k) xy[k] = {col[idx[k]], y_[idx[k]] - mean};
        std::stable_sort(xy.begin(), xy.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        double ls = 0.0, lss = 0.0;
        double ts = 0.0, tss = 0.0;
        for (const auto& [xv, yv] : xy) {
          ts += yv;
          tss += yv * yv;
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
          ls += xy[k].second;
          lss += xy[k].second * xy[k].second;
          const std::size_t nl = k + 1, nr = n - nl;
          if (nl < min_leaf || nr < min_leaf) continue;
          if (!(xy[k].first < xy[k + 1].first)) continue;
          const double rs = ts - ls, rss = tss - lss;
          const double child = (lss - ls * ls / static_cast<double>(nl)) +
                               (rss - rs * rs / static_cast<double>(nr));
          const double gain = sse - child;
          if (gain > best.gain && gain > min_gain) {
            double thr = xy[k].first + (xy[k + 1].first - xy[k].first) / 2.0;
            if (!(thr < xy[k + 1].first)) thr = xy[k].first;
            best = Split{gain, static_cast<std::int32_t>(j), false, thr};
          }
        }
      } else {
        const std::size_t levels = x_.schema[j].levels.size();
        std::vector<double> s(levels, 0.0), ss(levels, 0.0);
        std::vector<std::size_t> cnt(levels, 0);
        double ts = 0.0, tss = 0.0;
        for (auto i : idx) {
          const auto l = static_cast<std::size_t>(col[i]);
          const double yv = y_[i] - mean;
          s[l] += yv;
          ss[l] += yv * yv;
          ++cnt[l];
          ts += yv;
          tss += yv * yv;
        }
        for (std::size_t l = 0; l < levels; ++l) {
          const std::size_t nl = cnt[l], nr = n - nl;
          if (nl < min_leaf || nr < min_leaf) continue;
          const double rs = ts - s[l], rss = tss - ss[l];
          const double child = (ss[l] - s[l] * s[l] / static_cast<double>(nl)) +
                               (rss - rs * rs / static_cast<double>(nr));
          const double gain = sse - child;
          if (gain > best.gain && gain > min_gain)
            best = Split{gain, static_cast<std::int32_t>(j), true, static_cast<double>(l)};
        }
      }
    }
    return best;
  }

  const FeatureFrame& x_;
  std::span<const double> y_;
  const TreeParams& params_;
  std::vector<double>& importance_;
  RegressionTree* tree_ = nullptr;
};

}  // namespace detail

// Bootstrap-aggregated CART regression trees with variance-reduction splits.
class BaggedTrees final : public Predictor {
 public:
  BaggedTrees(const FeatureFrame& x, std::span<const double> y, const TreeParams& params)
      : Predictor(names_of(x)), params_(params) {
    if (params.n_trees < 1) throw Error("bagged trees: n_trees must be at least 1");
    if (params.max_depth < 1) throw Error("bagged trees: max_depth must be at least 1");
    const std::size_t n = x.n_rows();
    if (n == 0 || y.size() != n) throw Error("bagged trees fit: empty or mismatched data");
    importance_.assign(x.n_cols(), 0.0);
    std::vector<double> per_tree(x.n_cols());
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      Rng rng(derive_seed(params.seed, {0x7265u, t}));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      std::vector<std::size_t> sample(n);
      for (auto& s : sample) s = pick(rng);
      std::sort(sample.begin(), sample.end());
      std::fill(per_tree.begin(), per_tree.end(), 0.0);
      detail::TreeBuilder builder(x, y, params, per_tree);
      trees_.push_back(builder.build(std::move(sample)));
      for (std::size_t j = 0; j < per_tree.size(); ++j)
        importance_[j] += per_tree[j] / static_cast<double>(n);
    }
    for (double& v : importance_) v /= static_cast<double>(params.n_trees);
  }

  PredictorKind kind() const override { return PredictorKind::builtin_bagged_trees; }

  // Mean over trees of the per-variable reduction in residual sum of squares,
  // scaled by the bootstrap size.
  const std::vector<double>& impurity_importance() const { return importance_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  const TreeParams& params() const { return params_; }

  // Exact grid means that only evaluate each tree once per combination of
  // grid values the tree can tell apart.
  std::vector<double> grid_means(const FeatureFrame& base, std::span<const GridAxis> axes,
                                 unsigned workers) const override {
    check_batch(base);
    const std::size_t cells = grid_cell_count(axes);
    const std::size_t n = base.n_rows();
    std::vector<std::vector<double>> tables(trees_.size());
    std::vector<std::vector<std::vector<std::size_t>>> classes(trees_.size());
    parallel_for(trees_.size(), workers, [&](std::size_t t) {
      const auto& tree = trees_[t];
      auto& cls = classes[t];
      cls.resize(axes.size());
      std::vector<std::vector<double>> reps(axes.size());
      for (std::size_t k = 0; k < axes.size(); ++k)
        partition_axis(tree, base, axes[k], cls[k], reps[k]);
      std::size_t combos = 1;
      for (const auto& r : reps) combos *= r.size();
      auto& table = tables[t];
      table.assign(combos, 0.0);
      std::vector<double> over(axes.size());
      for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rem = c;
        for (std::size_t k = axes.size(); k-- > 0;) {
          over[k] = reps[k][rem % reps[k].size()];
          rem /= reps[k].size();
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += tree.leaf_value([&](std::size_t f) {
            for (std::size_t k = 0; k < axes.size(); ++k)
              if (axes[k].column == f) return over[k];
            return base.columns[f][i];
          });
        }
        table[c] = acc / static_cast<double>(n);
      }
    });
    std::vector<double> out(cells, 0.0);
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      const auto& cls = classes[t];
      std::vector<std::size_t> width(axes.size(), 1);
      for (std::size_t k = 0; k < axes.size(); ++k)
        for (auto g : cls[k]) width[k] = std::max(width[k], g + 1);
      for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t rem = cell;
        for (std::size_t k = axes.size(); k-- > 0;) {
          idx[k] = rem % axes[k].values.size();
          rem /= axes[k].values.size();
        }
        std::size_t combo = 0;
        for (std::size_t k = 0; k < axes.size(); ++k) combo = combo * width[k] + cls[k][idx[k]];
        out[cell] += tables[t][combo];
      }
    }
    for (double& v : out) v /= static_cast<double>(trees_.size());
    return out;
  }

 protected:
  std::vector<double> predict_unchecked(const FeatureFrame& batch) const override {
    std::vector<double> out(batch.n_rows(), 0.0);
    for (const auto& tree : trees_)
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += tree.leaf_value([&](std::size_t f) { return batch.columns[f][i]; });
    for (double& v : out) v /= static_cast<double>(trees_.size());
    return out;
  }

 private:
  static std::vector<std::string> names_of(const FeatureFrame& x) {
    std::vector<std::string> names;
    for (const auto& s : x.schema) names.push_back(s.name);
    return names;
  }

  // Groups grid values that take the same branch at every split of `tree`
  // on this axis' column. classes[g] is the group of grid value g; reps holds
  // the first grid value of each group.
  static void partition_axis(const RegressionTree& tree, const FeatureFrame& base,
                             const GridAxis& axis, std::vector<std::size_t>& classes,
                             std::vector<double>& reps) {
    classes.assign(axis.values.size(), 0);
    reps.clear();
    const bool categorical = base.schema[axis.column].kind == ColumnKind::categorical;
    std::vector<double> thresholds;
    for (const auto& node : tree.nodes)
      if (node.feature == static_cast<std::int32_t>(axis.column)) thresholds.push_back(node.threshold);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    std::vector<std::pair<std::size_t, std::size_t>> key_to_class;
    for (std::size_t g = 0; g < axis.values.size(); ++g) {
      const double v = axis.values[g];
      std::size_t key;
      if (categorical) {
        auto it = std::find(thresholds.begin(), thresholds.end(), v);
        key = it == thresholds.end() ? thresholds.size() : static_cast<std::size_t>(it - thresholds.begin());
      } else {
        key = static_cast<std::size_t>(std::lower_bound(thresholds.begin(), thresholds.end(), v) -
                                       thresholds.begin());
      }
      auto found = std::find_if(key_to_class.begin(), key_to_class.end(),
                                [&](const auto& kc) { return kc.first == key; });
      if (found == key_to_class.end()) {
        key_to_class.emplace_back(key, reps.size());
        classes[g] = reps.size();
        reps.push_back(v);
      } else {
        classes[g] = found->second;
      }
    }
  }

  TreeParams params_;
  std::vector<RegressionTree> trees_;
  std::vector<double> importance_;
};

}  // namespace vivid
