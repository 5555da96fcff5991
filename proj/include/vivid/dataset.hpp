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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vivid/common.hpp"
#include "vivid/csv.hpp"

namespace vivid {

enum class ColumnKind { numeric, categorical };

inline const char* to_string(ColumnKind k) {
  return k == ColumnKind::numeric ? "numeric" : "categorical";
}

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  // Categorical only; a value is stored as its index into this list.
  std::vector<std::string> levels;

  bool operator==(const ColumnSchema&) const = default;
};

// Column-major block of feature values. Categorical cells hold level indices.
// This is the batch type every predictor consumes.
struct FeatureFrame {
  std::vector<ColumnSchema> schema;
  std::vector<std::vector<double>> columns;

  std::size_t n_rows() const { return columns.empty() ? 0 : columns[0].size(); }
  std::size_t n_cols() const { return columns.size(); }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t j = 0; j < schema.size(); ++j)
      if (schema[j].name == name) return j;
    throw Error("unknown column '" + std::string(name) + "'");
  }
};

// Parses a decimal number; rejects anything non-finite or with trailing junk.
inline std::optional<double> parse_finite(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

// Shortest representation that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

class Dataset {
 public:
  Dataset(std::vector<ColumnSchema> schema,
          std::vector<std::vector<double>> columns, std::string response)
      : schema_(std::move(schema)),
        columns_(std::move(columns)),
        response_(std::move(response)) {
    validate();
  }

  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const std::string& response() const { return response_; }
  std::size_t n_rows() const { return columns_.front().size(); }
  std::size_t n_cols() const { return schema_.size(); }
  std::size_t response_index() const { return column_index(response_); }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t j = 0; j < schema_.size(); ++j)
      if (schema_[j].name == name) return j;
    throw Error("unknown column '" + std::string(name) + "'");
  }
  bool has_column(std::string_view name) const {
    for (const auto& c : schema_)
      if (c.name == name) return true;
    return false;
  }
  const ColumnSchema& column(std::string_view name) const {
    return schema_[column_index(name)];
  }
  std::span<const double> values(std::string_view name) const {
    return columns_[column_index(name)];
  }
  std::span<const double> values(std::size_t j) const { return columns_[j]; }
  std::span<const double> response_values() const { return values(response_); }

  std::vector<std::string> predictor_names() const {
    std::vector<std::string> out;
    for (const auto& c : schema_)
      if (c.name != response_) out.push_back(c.name);
    return out;
  }

  // Throws unless `name` is a column other than the response.
  std::size_t predictor_index(std::string_view name) const {
    const std::size_t j = column_index(name);
    if (schema_[j].name == response_)
      throw Error("'" + std::string(name) + "' is the response, not a predictor");
    return j;
  }

  // Predictor columns in dataset order.
  FeatureFrame features() const {
    FeatureFrame f;
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (schema_[j].name == response_) continue;
      f.schema.push_back(schema_[j]);
      f.columns.push_back(columns_[j]);
    }
    return f;
  }

  FeatureFrame features(std::span<const std::size_t> rows) const {
    FeatureFrame f;
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (schema_[j].name == response_) continue;
      f.schema.push_back(schema_[j]);
      std::vector<double> col;
      col.reserve(rows.size());
      for (auto r : rows) col.push_back(columns_[j].at(r));
      f.columns.push_back(std::move(col));
    }
    return f;
  }

  Dataset subset(std::span<const std::size_t> rows) const {
    if (rows.empty()) throw Error("dataset subset must keep at least one row");
    std::vector<std::vector<double>> cols(schema_.size());
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      cols[j].reserve(rows.size());
      for (auto r : rows) cols[j].push_back(columns_[j].at(r));
    }
    return Dataset(schema_, std::move(cols), response_);
  }

  // Text of one cell as it would appear in a CSV file.
  std::string cell_text(std::size_t row, std::size_t col) const {
    const double v = columns_[col][row];
    if (schema_[col].kind == ColumnKind::categorical)
      return schema_[col].levels[static_cast<std::size_t>(v)];
    return format_number(v);
  }

  bool operator==(const Dataset&) const = default;

 private:
  void validate() const {
    if (schema_.empty()) throw Error("dataset has no columns");
    if (columns_.size() != schema_.size())
      throw Error("dataset column count does not match schema");
    std::set<std::string> seen;
    for (const auto& c : schema_) {
      if (c.name.empty()) throw Error("column names must be nonempty");
      if (!seen.insert(c.name).second)
        throw Error("duplicate column name '" + c.name + "'");
      if (c.kind == ColumnKind::categorical && c.levels.empty())
        throw Error("categorical column '" + c.name + "' has no levels");
      if (c.kind == ColumnKind::numeric && !c.levels.empty())
        throw Error("numeric column '" + c.name + "' must not carry levels");
    }
    if (!seen.count(response_))
      throw Error("response '" + response_ + "' is not a column");
    const std::size_t n = columns_.front().size();
    if (n == 0) throw Error("dataset has no rows");
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (columns_[j].size() != n) throw Error("ragged dataset columns");
      for (double v : columns_[j]) {
        if (!std::isfinite(v))
          throw Error("non-finite value in column '" + schema_[j].name + "'");
        if (schema_[j].kind == ColumnKind::categorical &&
            (v < 0 || v >= static_cast<double>(schema_[j].levels.size()) ||
             v != std::floor(v)))
          throw Error("invalid level code in column '" + schema_[j].name + "'");
      }
    }
  }

  std::vector<ColumnSchema> schema_;
  std::vector<std::vector<double>> columns_;
  std::string response_;
};

using KindOverrides = std::map<std::string, ColumnKind>;

// Builds a typed dataset from CSV text. A column is numeric iff every cell
// parses as a finite decimal; categorical levels are sorted.
inline Dataset parse_dataset(std::string_view text, const std::string& response,
                             const KindOverrides& overrides = {}) {
  auto records = csv::parse(text);
  if (records.empty()) throw Error("csv: missing header line");
  const auto header = records.front();
  const std::size_t p = header.size();
  if (records.size() < 2) throw Error("csv: empty body");
  if (std::find(header.begin(), header.end(), response) == header.end())
    throw Error("csv: response '" + response + "' not in header");
  for (const auto& [name, kind] : overrides)
    if (std::find(header.begin(), header.end(), name) == header.end())
      throw Error("csv: override for unknown column '" + name + "'");

  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != p)
      throw Error("csv: ragged row " + std::to_string(r + 1) + " (expected " +
                  std::to_string(p) + " fields, got " +
                  std::to_string(records[r].size()) + ")");
    for (std::size_t j = 0; j < p; ++j)
      if (records[r][j].empty())
        throw Error("csv: missing value in column '" + header[j] + "' at line " +
                    std::to_string(r + 1));
  }

  std::vector<ColumnSchema> schema(p);
  std::vector<std::vector<double>> columns(p);
  for (std::size_t j = 0; j < p; ++j) {
    schema[j].name = header[j];
    bool all_numeric = true;
    for (std::size_t r = 1; r < records.size() && all_numeric; ++r)
      all_numeric = parse_finite(records[r][j]).has_value();
    ColumnKind kind = all_numeric ? ColumnKind::numeric : ColumnKind::categorical;
    if (auto it = overrides.find(header[j]); it != overrides.end()) {
      if (it->second == ColumnKind::numeric && !all_numeric)
        throw Error("csv: column '" + header[j] +
                    "' is forced numeric but holds non-finite or non-numeric values");
      kind = it->second;
    }
    schema[j].kind = kind;
    auto& col = columns[j];
    col.reserve(records.size() - 1);
    if (kind == ColumnKind::numeric) {
      for (std::size_t r = 1; r < records.size(); ++r)
        col.push_back(*parse_finite(records[r][j]));
    } else {
      std::set<std::string> levels;
      for (std::size_t r = 1; r < records.size(); ++r) levels.insert(records[r][j]);
      schema[j].levels.assign(levels.begin(), levels.end());
      for (std::size_t r = 1; r < records.size(); ++r) {
        auto it = std::lower_bound(schema[j].levels.begin(), schema[j].levels.end(),
                                   records[r][j]);
        col.push_back(static_cast<double>(it - schema[j].levels.begin()));
      }
    }
  }
  return Dataset(std::move(schema), std::move(columns), response);
}

inline Dataset load_csv(const std::filesystem::path& path, const std::string& response,
                        const KindOverrides& overrides = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open data file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), response, overrides);
}

inline std::string to_csv(const Dataset& d) {
  std::string out;
  csv::Record header;
  for (const auto& c : d.schema()) header.push_back(c.name);
  out += csv::join(header) + "\n";
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    csv::Record row;
    for (std::size_t j = 0; j < d.n_cols(); ++j) row.push_back(d.cell_text(r, j));
    out += csv::join(row) + "\n";
  }
  return out;
}

struct SampleSpec {
  std::size_t nmax = kDefaultNmax;
  std::uint64_t seed = 0;
};

// Rows retained by `spec`: all rows when n <= nmax, otherwise a seeded
// uniform sample without replacement, in ascending order.
inline std::vector<std::size_t> sample_indices(std::size_t n, const SampleSpec& spec) {
  if (spec.nmax < 1) throw Error("nmax must be at least 1");
  if (n <= spec.nmax) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  Rng rng(derive_seed(spec.seed, "nmax-sample"));
  return sample_without_replacement(n, spec.nmax, rng);
}

inline Dataset sample_rows(const Dataset& d, const SampleSpec& spec) {
  if (d.n_rows() <= spec.nmax) {
    if (spec.nmax < 1) throw Error("nmax must be at least 1");
    return d;
  }
  return d.subset(sample_indices(d.n_rows(), spec));
}

struct NumericRange {
  double min = 0.0;
  double max = 0.0;
};
using ColumnRange = std::variant<NumericRange, std::vector<std::string>>;

inline ColumnRange column_range(const Dataset& d, std::string_view var) {
  const std::size_t j = d.predictor_index(var);
  const auto& schema = d.schema()[j];
  if (schema.kind == ColumnKind::categorical) return schema.levels;
  auto v = d.values(j);
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return NumericRange{*lo, *hi};
}

}  // namespace vivid
