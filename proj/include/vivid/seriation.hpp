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

// Matrix seriation: strongly interacting variables end up adjacent and
// high-VIVI variables move to the top-left.
//
// 1. Weight w_i = rescaled importance + rescaled row-max interaction, each
//    rescaled to [0, 1] across variables.
// 2. Dissimilarity d_ij = max interaction - interaction_ij.
// 3. Average-linkage agglomerative clustering.
// 4. Leaves are read off the dendrogram, placing first the child that holds
//    the heaviest variable (then larger total weight, then smaller name).
//
// Everything runs on a name-sorted copy of the matrix, so the result does
// not depend on the input order and reordering twice is a no-op.

#include <memory>
#include <numeric>

#include "vivid/vivi_matrix.hpp"

namespace vivid {

struct Ordering {
  std::vector<std::size_t> perm;  // perm[k] = input index placed at position k
  double objective = 0.0;
};

namespace detail {

inline std::vector<double> rescale01(const std::vector<double>& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  std::vector<double> out(x.size(), 0.0);
  if (*hi > *lo)
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - *lo) / (*hi - *lo);
  return out;
}

}  // namespace detail

inline std::vector<double> seriation_weights(const ViviMatrix& v) {
  const std::size_t m = v.size();
  std::vector<double> diag(m), rowmax(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    diag[i] = v.values[i][i];
    bool first = true;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      rowmax[i] = first ? v.values[i][j] : std::max(rowmax[i], v.values[i][j]);
      first = false;
    }
  }
  const auto a = detail::rescale01(diag);
  const auto b = detail::rescale01(rowmax);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = a[i] + b[i];
  return w;
}

// Top-left pull cost: sum over positions k (0-based) of k * w[perm[k]].
// Lower is better.
inline double ordering_objective(const std::vector<double>& w, const std::vector<std::size_t>& perm) {
  double cost = 0.0;
  for (std::size_t k = 0; k < perm.size(); ++k) cost += static_cast<double>(k) * w[perm[k]];
  return cost;
}

inline Ordering compute_ordering(const ViviMatrix& v) {
  const std::size_t m = v.size();
  Ordering result;
  if (m == 0) return result;

  // Canonical (name-sorted) view.
  std::vector<std::size_t> canon(m);
  std::iota(canon.begin(), canon.end(), 0);
  std::sort(canon.begin(), canon.end(), [&](auto a, auto b) { return v.vars[a] < v.vars[b]; });
  const auto w_input = seriation_weights(v);

  double max_off = 0.0;
  bool any_off = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) {
        max_off = any_off ? std::max(max_off, v.values[i][j]) : v.values[i][j];
        any_off = true;
      }
  auto dist = [&](std::size_t a, std::size_t b) { return max_off - v.values[canon[a]][canon[b]]; };

  struct Node {
    std::vector<std::size_t> members;  // canonical indices, ascending
    std::unique_ptr<Node> left, right;
    double max_w = 0.0, total_w = 0.0;
    std::size_t min_member = 0;  // smallest canonical index = smallest name
  };
  std::vector<std::unique_ptr<Node>> active;
  for (std::size_t i = 0; i < m; ++i) {
    auto n = std::make_unique<Node>();
    n->members = {i};
    n->max_w = n->total_w = w_input[canon[i]];
    n->min_member = i;
    active.push_back(std::move(n));
  }
  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = 0.0;
    bool have = false;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        double acc = 0.0;
        for (auto x : active[a]->members)
          for (auto y : active[b]->members) acc += dist(x, y);
        const double avg =
            acc / static_cast<double>(active[a]->members.size() * active[b]->members.size());
        // Active clusters stay sorted by smallest member, so the first pair
        // found at the minimum is the lexicographically first one.
        if (!have || avg < best) {
          best = avg;
          best_a = a;
          best_b = b;
          have = true;
        }
      }
    }
    auto merged = std::make_unique<Node>();
    merged->left = std::move(active[best_a]);
    merged->right = std::move(active[best_b]);
    merged->members = merged->left->members;
    merged->members.insert(merged->members.end(), merged->right->members.begin(),
                           merged->right->members.end());
    std::sort(merged->members.begin(), merged->members.end());
    merged->max_w = std::max(merged->left->max_w, merged->right->max_w);
    merged->total_w = merged->left->total_w + merged->right->total_w;
    merged->min_member = merged->members.front();
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
    auto pos = std::find_if(active.begin(), active.end(),
                            [&](const auto& n) { return n->min_member > merged->min_member; });
    active.insert(pos, std::move(merged));
  }

  auto heavier_first = [](const Node& a, const Node& b) {
    if (a.max_w != b.max_w) return a.max_w > b.max_w;
    if (a.total_w != b.total_w) return a.total_w > b.total_w;
    return a.min_member < b.min_member;
  };
  std::vector<std::size_t> leaves;
  auto walk = [&](auto&& self, const Node& n) -> void {
    if (!n.left) {
      leaves.push_back(n.members.front());
      return;
    }
    const bool left_first = heavier_first(*n.left, *n.right);
    self(self, left_first ? *n.left : *n.right);
    self(self, left_first ? *n.right : *n.left);
  };
  walk(walk, *active.front());

  for (auto c : leaves) result.perm.push_back(canon[c]);
  result.objective = ordering_objective(w_input, result.perm);
  return result;
}

inline ViviMatrix reorder(const ViviMatrix& v) {
  const auto ord = compute_ordering(v);
  std::vector<std::string> names;
  for (auto i : ord.perm) names.push_back(v.vars[i]);
  return apply_order(v, names);
}

// Elementwise mean after aligning every input to the first one's order.
inline ViviMatrix average_matrices(const std::vector<ViviMatrix>& mats) {
  if (mats.empty()) throw Error("nothing to average");
  const auto& ref = mats.front();
  const std::set<std::string> ref_set(ref.vars.begin(), ref.vars.end());
  ViviMatrix out = ViviMatrix::zeros(ref.vars);
  for (const auto& m : mats) {
    if (m.size() != ref.size() || std::set<std::string>(m.vars.begin(), m.vars.end()) != ref_set)
      throw Error("cannot average matrices over different variable sets");
  }
  const std::size_t n = ref.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (const auto& m : mats) acc += m.values[m.index_of(ref.vars[i])][m.index_of(ref.vars[j])];
      out.values[i][j] = acc / static_cast<double>(mats.size());
    }
  }
  out.importance_type = ref.importance_type;
  out.normalized = ref.normalized;
  for (const auto& m : mats) {
    if (m.importance_type != ref.importance_type) out.importance_type = "mixed";
    if (m.normalized != ref.normalized) out.normalized = false;
  }
  out.meta = ref.meta;
  out.meta.perm_replicates.clear();
  out.meta.averaged = true;
  return out;
}

}  // namespace vivid
