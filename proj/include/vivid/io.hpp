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

// JSON files for ViviMatrix, PDSurface and ZPath; CSV long-table export.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vivid/csv.hpp"
#include "vivid/dataset.hpp"
#include "vivid/pdp.hpp"
#include "vivid/vivi_matrix.hpp"
#include "vivid/zenpath.hpp"

namespace vivid::io {

using Json = nlohmann::ordered_json;

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed " + std::string(what) + " JSON: " + e.what());
  }
}

template <typename T>
T field(const Json& j, const char* key, std::string_view what) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

// ---------------------------------------------------------------------------
// ViviMatrix

inline Json to_json(const ViviMatrix& v) {
  Json meta = {{"gridSize", v.meta.grid_size},
               {"nmax", v.meta.nmax},
               {"numPerm", v.meta.num_perm},
               {"seed", v.meta.seed},
               {"averaged", v.meta.averaged}};
  if (!v.meta.perm_replicates.empty()) meta["permReplicates"] = v.meta.perm_replicates;
  return Json{{"vars", v.vars},
              {"matrix", v.values},
              {"importance_type", v.importance_type},
              {"normalized", v.normalized},
              {"meta", meta}};
}

inline ViviMatrix vivi_from_json(const Json& j) {
  constexpr std::string_view what = "vivi matrix";
  ViviMatrix v;
  v.vars = field<std::vector<std::string>>(j, "vars", what);
  v.values = field<std::vector<std::vector<double>>>(j, "matrix", what);
  v.importance_type = field<std::string>(j, "importance_type", what);
  v.normalized = field<bool>(j, "normalized", what);
  if (j.contains("meta")) {
    const auto& m = j.at("meta");
    if (m.contains("gridSize")) v.meta.grid_size = field<std::size_t>(m, "gridSize", what);
    if (m.contains("nmax")) v.meta.nmax = field<std::size_t>(m, "nmax", what);
    if (m.contains("numPerm")) v.meta.num_perm = field<std::size_t>(m, "numPerm", what);
    if (m.contains("seed")) v.meta.seed = field<std::uint64_t>(m, "seed", what);
    if (m.contains("averaged")) v.meta.averaged = field<bool>(m, "averaged", what);
    if (m.contains("permReplicates"))
      v.meta.perm_replicates = field<std::vector<std::vector<double>>>(m, "permReplicates", what);
  }
  v.validate();
  return v;
}

inline std::string dump_vivi(const ViviMatrix& v) { return to_json(v).dump(2) + "\n"; }

inline ViviMatrix parse_vivi(std::string_view text) { return vivi_from_json(parse_json(text, "vivi matrix")); }

inline void save_vivi(const std::filesystem::path& path, const ViviMatrix& v) { write_text(path, dump_vivi(v)); }

inline ViviMatrix load_vivi(const std::filesystem::path& path) { return parse_vivi(read_text(path)); }

// Header Variable_1,Variable_2,Value,Measure,Row,Col.
inline std::string long_table_csv(const ViviMatrix& v) {
  std::string out = csv::join({"Variable_1", "Variable_2", "Value", "Measure", "Row", "Col"}) + "\n";
  for (const auto& r : as_long_table(v))
    out += csv::join({r.variable_1, r.variable_2, format_number(r.value), to_string(r.measure),
                      std::to_string(r.row), std::to_string(r.col)}) + "\n";
  return out;
}

inline std::vector<LongRow> parse_long_table(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty() || records[0] != csv::Record{"Variable_1", "Variable_2", "Value", "Measure", "Row", "Col"})
    throw Error("long table: unexpected header");
  std::vector<LongRow> rows;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& rec = records[k];
    if (rec.size() != 6) throw Error("long table: row " + std::to_string(k) + " has " +
                                     std::to_string(rec.size()) + " fields");
    LongRow r;
    r.variable_1 = rec[0];
    r.variable_2 = rec[1];
    const auto value = parse_finite(rec[2]);
    if (!value) throw Error("long table: bad value '" + rec[2] + "'");
    r.value = *value;
    if (rec[3] == "Vimp")
      r.measure = Measure::Vimp;
    else if (rec[3] == "Vint")
      r.measure = Measure::Vint;
    else
      throw Error("long table: bad measure '" + rec[3] + "'");
    const auto row = parse_finite(rec[4]), col = parse_finite(rec[5]);
    if (!row || !col || *row < 1 || *col < 1) throw Error("long table: bad row/col index");
    r.row = static_cast<std::size_t>(*row);
    r.col = static_cast<std::size_t>(*col);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// PDSurface

inline Json grid_json(const Grid1D& g) {
  if (g.kind == ColumnKind::categorical) return Json(g.labels);
  return Json(g.points);
}

inline Json to_json(const PDSurface& s) {
  Json vars = Json::array(), grid = Json::array();
  for (const auto& g : s.grids) {
    vars.push_back(g.var);
    grid.push_back(grid_json(g));
  }
  Json values;
  if (s.is_2d()) {
    values = Json::array();
    for (std::size_t a = 0; a < s.grids[0].size(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < s.grids[1].size(); ++b) row.push_back(s.at(a, b));
      values.push_back(row);
    }
  } else {
    values = s.values;
  }
  Json mask = nullptr;
  if (s.mask) {
    mask = Json::array();
    for (std::size_t a = 0; a < s.grids[0].size(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < s.grids[1].size(); ++b) row.push_back(s.masked(a, b));
      mask.push_back(row);
    }
  }
  Json ice = nullptr;
  if (s.ice) ice = Json{{"rows", s.ice->rows}, {"curves", s.ice->curves}};
  return Json{{"vars", vars}, {"grid", grid}, {"values", values}, {"mask", mask}, {"ice", ice},
              {"center", s.center}};
}

inline PDSurface surface_from_json(const Json& j) {
  constexpr std::string_view what = "pd surface";
  const auto vars = field<std::vector<std::string>>(j, "vars", what);
  if (vars.empty() || vars.size() > 2) throw Error("pd surface: expected 1 or 2 vars");
  const auto& grid = j.at("grid");
  if (!grid.is_array() || grid.size() != vars.size()) throw Error("pd surface: grid does not match vars");
  PDSurface s;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    Grid1D g;
    g.var = vars[k];
    const auto& pts = grid[k];
    if (!pts.is_array() || pts.empty()) throw Error("pd surface: empty grid");
    if (pts[0].is_string()) {
      g.kind = ColumnKind::categorical;
      g.labels = pts.get<std::vector<std::string>>();
      for (std::size_t l = 0; l < g.labels.size(); ++l) g.points.push_back(static_cast<double>(l));
    } else {
      g.points = pts.get<std::vector<double>>();
    }
    s.grids.push_back(std::move(g));
  }
  const auto& values = j.at("values");
  if (s.is_2d()) {
    const auto rows = values.get<std::vector<std::vector<double>>>();
    if (rows.size() != s.grids[0].size()) throw Error("pd surface: values do not match grid");
    for (const auto& r : rows) {
      if (r.size() != s.grids[1].size()) throw Error("pd surface: values do not match grid");
      s.values.insert(s.values.end(), r.begin(), r.end());
    }
  } else {
    s.values = values.get<std::vector<double>>();
    if (s.values.size() != s.grids[0].size()) throw Error("pd surface: values do not match grid");
  }
  if (j.contains("mask") && !j.at("mask").is_null()) {
    if (!s.is_2d()) throw Error("pd surface: mask on a 1-D surface");
    std::vector<std::uint8_t> mask;
    for (const auto& r : j.at("mask").get<std::vector<std::vector<bool>>>())
      for (bool b : r) mask.push_back(b ? 1 : 0);
    if (mask.size() != s.values.size()) throw Error("pd surface: mask does not match grid");
    s.mask = std::move(mask);
  }
  if (j.contains("ice") && !j.at("ice").is_null()) {
    if (s.is_2d()) throw Error("pd surface: ICE curves on a 2-D surface");
    IceCurves ice;
    ice.rows = j.at("ice").at("rows").get<std::vector<std::size_t>>();
    ice.curves = j.at("ice").at("curves").get<std::vector<std::vector<double>>>();
    if (ice.rows.size() != ice.curves.size()) throw Error("pd surface: ICE rows and curves differ in count");
    for (const auto& c : ice.curves)
      if (c.size() != s.values.size()) throw Error("pd surface: ICE curve length does not match grid");
    s.ice = std::move(ice);
  }
  if (j.contains("center")) s.center = j.at("center").get<double>();
  return s;
}

inline std::string dump_surfaces(const std::vector<PDSurface>& surfaces) {
  Json arr = Json::array();
  for (const auto& s : surfaces) arr.push_back(to_json(s));
  return arr.dump() + "\n";
}

inline std::vector<PDSurface> parse_surfaces(std::string_view text) {
  const auto j = parse_json(text, "pd surface");
  std::vector<PDSurface> out;
  try {
    if (j.is_array())
      for (const auto& s : j) out.push_back(surface_from_json(s));
    else
      out.push_back(surface_from_json(j));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("pd surface: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// ZPath

inline Json to_json(const ZPath& zp) {
  return Json{{"method", to_string(zp.method)}, {"connected", zp.connected}, {"sequences", zp.sequences}};
}

inline ZPath zpath_from_json(const Json& j) {
  constexpr std::string_view what = "zpath";
  ZPath zp;
  zp.method = parse_zpath_method(field<std::string>(j, "method", what));
  zp.connected = field<bool>(j, "connected", what);
  zp.sequences = field<std::vector<std::vector<std::string>>>(j, "sequences", what);
  for (const auto& s : zp.sequences)
    if (s.size() < 2) throw Error("zpath: sequences need at least two variables");
  return zp;
}

inline std::string dump_zpath(const ZPath& zp) { return to_json(zp).dump(2) + "\n"; }

inline ZPath parse_zpath(std::string_view text) { return zpath_from_json(parse_json(text, "zpath")); }

}  // namespace vivid::io
