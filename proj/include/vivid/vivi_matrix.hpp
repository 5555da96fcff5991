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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vivid/common.hpp"

namespace vivid {

struct ViviMeta {
  std::size_t grid_size = 0;
  std::size_t nmax = 0;
  std::size_t num_perm = 0;
  std::uint64_t seed = 0;
  bool averaged = false;
  // perm_replicates[j][r]: importance of variable j in replicate r.
  std::vector<std::vector<double>> perm_replicates;

  bool operator==(const ViviMeta&) const = default;
};

// Importance on the diagonal, pairwise interaction off the diagonal.
struct ViviMatrix {
  std::vector<std::string> vars;
  std::vector<std::vector<double>> values;
  std::string importance_type = "agnostic";
  bool normalized = false;
  ViviMeta meta;

  std::size_t size() const { return vars.size(); }
  double importance(std::size_t i) const { return values[i][i]; }
  double interaction(std::size_t i, std::size_t j) const { return values[i][j]; }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return i;
    throw Error("variable '" + std::string(name) + "' not in matrix");
  }

  static ViviMatrix zeros(std::vector<std::string> names) {
    ViviMatrix v;
    const std::size_t m = names.size();
    v.vars = std::move(names);
    v.values.assign(m, std::vector<double>(m, 0.0));
    return v;
  }

  void validate() const {
    const std::size_t m = vars.size();
    if (m == 0) throw Error("vivi matrix has no variables");
    if (std::set<std::string>(vars.begin(), vars.end()).size() != m)
      throw Error("vivi matrix variable names must be unique");
    if (values.size() != m) throw Error("vivi matrix is not square");
    for (const auto& row : values)
      if (row.size() != m) throw Error("vivi matrix is not square");
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (!std::isfinite(values[i][j])) throw Error("vivi matrix holds a non-finite value");
        if (i == j) continue;
        if (values[i][j] != values[j][i]) throw Error("vivi matrix is not symmetric");
        if (values[i][j] < 0) throw Error("vivi matrix holds a negative interaction");
        if (normalized && values[i][j] > 1.0 + 1e-9)
          throw Error("normalized interaction exceeds 1");
      }
    }
  }

  bool operator==(const ViviMatrix&) const = default;
};

// Symmetric permutation of rows and columns into `order`, given by name.
inline ViviMatrix apply_order(const ViviMatrix& v, const std::vector<std::string>& order) {
  if (order.size() != v.size() ||
      std::set<std::string>(order.begin(), order.end()) != std::set<std::string>(v.vars.begin(), v.vars.end()) ||
      std::set<std::string>(order.begin(), order.end()).size() != order.size())
    throw Error("ordering is not a permutation of the matrix variables");
  std::vector<std::size_t> src;
  for (const auto& name : order) src.push_back(v.index_of(name));
  ViviMatrix out = v;
  out.vars = order;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < order.size(); ++j) out.values[i][j] = v.values[src[i]][src[j]];
  if (!v.meta.perm_replicates.empty()) {
    for (std::size_t i = 0; i < order.size(); ++i)
      out.meta.perm_replicates[i] = v.meta.perm_replicates[src[i]];
  }
  return out;
}

enum class Measure { Vimp, Vint };

inline const char* to_string(Measure m) { return m == Measure::Vimp ? "Vimp" : "Vint"; }

struct LongRow {
  std::string variable_1;
  std::string variable_2;
  double value = 0.0;
  Measure measure = Measure::Vimp;
  std::size_t row = 1;  // 1-based
  std::size_t col = 1;  // 1-based

  bool operator==(const LongRow&) const = default;
};

// m*m rows in column-major order.
inline std::vector<LongRow> as_long_table(const ViviMatrix& v) {
  std::vector<LongRow> out;
  const std::size_t m = v.size();
  out.reserve(m * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i)
      out.push_back(LongRow{v.vars[i], v.vars[j], v.values[i][j], i == j ? Measure::Vimp : Measure::Vint,
                            i + 1, j + 1});
  return out;
}

inline ViviMatrix from_long_table(const std::vector<LongRow>& rows) {
  std::size_t m = 0;
  for (const auto& r : rows) m = std::max({m, r.row, r.col});
  if (m == 0 || rows.size() != m * m) throw Error("long table does not describe a square matrix");
  std::vector<std::string> names(m);
  for (const auto& r : rows) {
    if (r.row < 1 || r.col < 1) throw Error("long table indices are 1-based");
    names[r.row - 1] = r.variable_1;
    names[r.col - 1] = r.variable_2;
  }
  ViviMatrix v = ViviMatrix::zeros(names);
  for (const auto& r : rows) {
    if ((r.measure == Measure::Vimp) != (r.row == r.col))
      throw Error("long table measure does not match its position");
    v.values[r.row - 1][r.col - 1] = r.value;
  }
  return v;
}

// Builds a matrix from importance and interaction lists computed elsewhere.
inline ViviMatrix import_external(const std::vector<std::pair<std::string, double>>& importance,
                                  const std::vector<std::tuple<std::string, std::string, double>>& interaction) {
  std::vector<std::string> names;
  for (const auto& [name, value] : importance) names.push_back(name);
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    throw Error("duplicate variable in importance list");
  ViviMatrix v = ViviMatrix::zeros(names);
  v.importance_type = "external";
  for (std::size_t i = 0; i < importance.size(); ++i) v.values[i][i] = importance[i].second;
  std::map<std::pair<std::size_t, std::size_t>, double> seen;
  for (const auto& [a, b, value] : interaction) {
    const auto find = [&](const std::string& name) {
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw Error("interaction references unknown variable '" + name + "'");
      return static_cast<std::size_t>(it - names.begin());
    };
    const std::size_t i = find(a), j = find(b);
    if (i == j) throw Error("interaction pair repeats variable '" + a + "'");
    const auto key = std::minmax(i, j);
    if (auto it = seen.find(key); it != seen.end() && it->second != value)
      throw Error("conflicting interaction values for pair (" + a + ", " + b + ")");
    seen[key] = value;
    v.values[i][j] = v.values[j][i] = value;
  }
  return v;
}

}  // namespace vivid
