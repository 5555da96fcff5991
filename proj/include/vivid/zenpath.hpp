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

// Zen-paths: variable sequences whose consecutive pairs pick the bivariate
// partial dependence panels to draw.

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "vivid/vivi_matrix.hpp"

namespace vivid {

struct WeightedEdge {
  std::string u;  // u < v lexicographically
  std::string v;
  double weight = 0.0;
  bool operator==(const WeightedEdge&) const = default;
};

struct WeightedGraph {
  std::vector<std::string> nodes;      // matrix order, isolated nodes dropped
  std::vector<WeightedEdge> edges;     // original edges
  std::vector<WeightedEdge> augmented; // added by the greedy method
};

enum class ZPathMethod { greedy_weighted, strictly_weighted };

inline const char* to_string(ZPathMethod m) {
  return m == ZPathMethod::greedy_weighted ? "greedy.weighted" : "strictly.weighted";
}

inline ZPathMethod parse_zpath_method(std::string_view s) {
  if (s == "greedy.weighted" || s == "greedy_weighted") return ZPathMethod::greedy_weighted;
  if (s == "strictly.weighted" || s == "strictly_weighted") return ZPathMethod::strictly_weighted;
  throw Error("unknown zpath method '" + std::string(s) + "'");
}

struct ZPath {
  std::vector<std::vector<std::string>> sequences;
  ZPathMethod method = ZPathMethod::greedy_weighted;
  bool connected = false;
  bool operator==(const ZPath&) const = default;
};

// Type-7 sample quantile of the off-diagonal entries (both triangles).
inline double interaction_quantile(const ViviMatrix& v, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("quantile must lie in [0, 1]");
  std::vector<double> x;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (i != j) x.push_back(v.values[i][j]);
  if (x.empty()) throw Error("matrix has no interactions");
  std::sort(x.begin(), x.end());
  const double h = static_cast<double>(x.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

inline WeightedGraph build_graph(const ViviMatrix& v, double cutoff) {
  if (!std::isfinite(cutoff)) throw Error("cutoff must be finite");
  WeightedGraph g;
  std::vector<bool> used(v.size(), false);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v.values[i][j] > cutoff) {
        const auto& a = v.vars[i];
        const auto& b = v.vars[j];
        g.edges.push_back(a < b ? WeightedEdge{a, b, v.values[i][j]} : WeightedEdge{b, a, v.values[i][j]});
        used[i] = used[j] = true;
      }
  if (g.edges.empty()) throw Error("no interaction exceeds the cutoff");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (used[i]) g.nodes.push_back(v.vars[i]);
  return g;
}

namespace detail {

// Heavier first; ties lexicographic on (u, v).
inline bool edge_before(const WeightedEdge& a, const WeightedEdge& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

struct MultiEdge {
  std::size_t a, b;  // node indices
  double weight;
  bool augmented;
};

class EulerWalker {
 public:
  EulerWalker(const std::vector<std::string>& names, std::vector<MultiEdge> edges)
      : names_(names), edges_(std::move(edges)), used_(edges_.size(), false), incident_(names.size()) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      incident_[edges_[e].a].push_back(e);
      incident_[edges_[e].b].push_back(e);
    }
  }

  struct Tour {
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> edges;  // edges[k] joins nodes[k] and nodes[k + 1]
  };

  Tour tour(std::size_t start, std::size_t first_edge) {
    Tour t = walk(start, first_edge);
    while (true) {
      std::size_t pos = t.nodes.size();
      for (std::size_t k = 0; k < t.nodes.size() && pos == t.nodes.size(); ++k)
        if (next_edge(t.nodes[k]) != kNone) pos = k;
      if (pos == t.nodes.size()) break;
      auto sub = walk(t.nodes[pos], kNone);
      const auto at = static_cast<std::ptrdiff_t>(pos);
      t.nodes.insert(t.nodes.begin() + at + 1, sub.nodes.begin() + 1, sub.nodes.end());
      t.edges.insert(t.edges.begin() + at, sub.edges.begin(), sub.edges.end());
    }
    return t;
  }

  bool augmented(std::size_t e) const { return edges_[e].augmented; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t other(std::size_t e, std::size_t at) const {
    return edges_[e].a == at ? edges_[e].b : edges_[e].a;
  }

  // Highest weight; then original before augmented; then neighbour name.
  std::size_t next_edge(std::size_t at) const {
    std::size_t best = kNone;
    for (auto e : incident_[at]) {
      if (used_[e]) continue;
      if (best == kNone) {
        best = e;
        continue;
      }
      const auto& x = edges_[e];
      const auto& y = edges_[best];
      if (x.weight != y.weight) {
        if (x.weight > y.weight) best = e;
      } else if (x.augmented != y.augmented) {
        if (!x.augmented) best = e;
      } else if (names_[other(e, at)] < names_[other(best, at)]) {
        best = e;
      }
    }
    return best;
  }

  Tour walk(std::size_t start, std::size_t first_edge) {
    Tour t{{start}, {}};
    std::size_t at = start;
    std::size_t e = first_edge != kNone ? first_edge : next_edge(at);
    while (e != kNone) {
      used_[e] = true;
      at = other(e, at);
      t.nodes.push_back(at);
      t.edges.push_back(e);
      e = next_edge(at);
    }
    return t;
  }

  const std::vector<std::string>& names_;
  std::vector<MultiEdge> edges_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> incident_;
};

}  // namespace detail

// Greedy Eulerian tour per connected component. Odd-degree vertices are
// paired (descending incident weight) and joined by augmented edges; the
// tour starts on the heaviest edge, from its endpoint with the smaller
// incident-weight sum, and always takes the heaviest unused edge, splicing
// sub-tours when it gets stuck. Trailing repair edges are dropped, so a
// single edge comes out as [u, v].
inline ZPath zpath_greedy(WeightedGraph& g) {
  if (g.edges.empty()) throw Error("zpath needs at least one edge");
  g.augmented.clear();
  const auto& names = g.nodes;
  auto index_of = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), s) - names.begin());
  };
  const std::size_t n = names.size();
  std::vector<double> strength(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    const std::size_t a = index_of(e.u), b = index_of(e.v);
    strength[a] += e.weight;
    strength[b] += e.weight;
    ++degree[a];
    ++degree[b];
    parent[find(a)] = find(b);
  }

  // Components ordered by their heaviest edge.
  std::vector<WeightedEdge> sorted = g.edges;
  std::sort(sorted.begin(), sorted.end(), detail::edge_before);
  std::vector<std::size_t> roots;
  for (const auto& e : sorted) {
    const std::size_t r = find(index_of(e.u));
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }

  ZPath out;
  out.method = ZPathMethod::greedy_weighted;
  for (const std::size_t root : roots) {
    std::vector<detail::MultiEdge> edges;
    std::map<std::pair<std::size_t, std::size_t>, double> weight_of;
    for (const auto& e : g.edges) {
      const std::size_t a = index_of(e.u), b = index_of(e.v);
      if (find(a) != root) continue;
      edges.push_back({a, b, e.weight, false});
      weight_of[std::minmax(a, b)] = e.weight;
    }
    std::vector<std::size_t> odd;
    for (std::size_t x = 0; x < n; ++x)
      if (find(x) == root && degree[x] % 2 == 1) odd.push_back(x);
    std::sort(odd.begin(), odd.end(), [&](auto x, auto y) {
      if (strength[x] != strength[y]) return strength[x] > strength[y];
      return names[x] < names[y];
    });
    for (std::size_t k = 0; k + 1 < odd.size(); k += 2) {
      const std::size_t a = odd[k], b = odd[k + 1];
      auto it = weight_of.find(std::minmax(a, b));
      const double w = it == weight_of.end() ? 0.0 : it->second;
      edges.push_back({a, b, w, true});
      const auto& na = names[a];
      const auto& nb = names[b];
      g.augmented.push_back(na < nb ? WeightedEdge{na, nb, w} : WeightedEdge{nb, na, w});
    }

    // Heaviest original edge of the component.
    std::size_t first = 0;
    for (std::size_t e = 1; e < edges.size(); ++e) {
      if (edges[e].augmented) continue;
      const WeightedEdge cand{names[edges[e].a], names[edges[e].b], edges[e].weight};
      const WeightedEdge best{names[edges[first].a], names[edges[first].b], edges[first].weight};
      if (detail::edge_before(cand, best)) first = e;
    }
    std::size_t start = edges[first].a, other = edges[first].b;
    if (strength[other] < strength[start] ||
        (strength[other] == strength[start] && names[other] < names[start]))
      std::swap(start, other);

    detail::EulerWalker walker(names, std::move(edges));
    auto t = walker.tour(start, first);
    // A closing step along a repair edge draws nothing new.
    while (!t.edges.empty() && walker.augmented(t.edges.back())) {
      t.edges.pop_back();
      t.nodes.pop_back();
    }
    std::vector<std::string> seq;
    for (auto x : t.nodes) seq.push_back(names[x]);
    out.sequences.push_back(std::move(seq));
  }
  out.connected = out.sequences.size() == 1;
  return out;
}

inline ZPath zpath_greedy(const WeightedGraph& g) {
  WeightedGraph copy = g;
  return zpath_greedy(copy);
}

// Edges in strictly decreasing weight. An edge extends the current sequence
// iff it contains the sequence's last variable; otherwise a new sequence
// starts. connect=true concatenates the sequences.
inline ZPath zpath_strict(const WeightedGraph& g, bool connect) {
  if (g.edges.empty()) throw Error("zpath needs at least one edge");
  std::vector<WeightedEdge> sorted = g.edges;
  std::sort(sorted.begin(), sorted.end(), detail::edge_before);
  ZPath out;
  out.method = ZPathMethod::strictly_weighted;
  std::vector<std::string> current;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& e = sorted[k];
    if (!current.empty() && (e.u == current.back() || e.v == current.back())) {
      current.push_back(e.u == current.back() ? e.v : e.u);
      continue;
    }
    if (!current.empty()) out.sequences.push_back(std::move(current));
    current = {e.u, e.v};
    if (k + 1 < sorted.size()) {
      const auto& next = sorted[k + 1];
      if (next.u == e.u || next.v == e.u) current = {e.v, e.u};
    }
  }
  out.sequences.push_back(std::move(current));
  if (connect && out.sequences.size() > 1) {
    std::vector<std::string> joined;
    for (const auto& s : out.sequences) joined.insert(joined.end(), s.begin(), s.end());
    out.sequences = {std::move(joined)};
  }
  out.connected = connect || out.sequences.size() == 1;
  return out;
}

// Consecutive pairs across all sequences, in order.
inline std::vector<std::pair<std::string, std::string>> zpath_pairs(const ZPath& zp) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : zp.sequences)
    for (std::size_t k = 0; k + 1 < s.size(); ++k) out.emplace_back(s[k], s[k + 1]);
  return out;
}

}  // namespace vivid
