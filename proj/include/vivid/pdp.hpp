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

// Partial dependence: grids, 1-D and 2-D surfaces, ICE curves and
// convex-hull extrapolation masks.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vivid/dataset.hpp"
#include "vivid/geometry.hpp"
#include "vivid/predictor.hpp"

namespace vivid {

struct Grid1D {
  std::string var;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<double> points;       // level codes for categorical grids
  std::vector<std::string> labels;  // level names (categorical only)

  std::size_t size() const { return points.size(); }
  bool operator==(const Grid1D&) const = default;
};

// Numeric: grid_size equally spaced points from min to max inclusive (one
// point for a constant column). Categorical: every level, in schema order.
inline Grid1D make_grid(const Dataset& d, std::string_view var, std::size_t grid_size) {
  if (grid_size < 1) throw Error("gridSize must be at least 1");
  Grid1D g;
  g.var = std::string(var);
  const auto range = column_range(d, var);
  if (const auto* levels = std::get_if<std::vector<std::string>>(&range)) {
    g.kind = ColumnKind::categorical;
    g.labels = *levels;
    for (std::size_t l = 0; l < levels->size(); ++l) g.points.push_back(static_cast<double>(l));
    return g;
  }
  const auto [lo, hi] = std::get<NumericRange>(range);
  if (lo == hi || grid_size == 1) {
    g.points = {lo};
    return g;
  }
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k + 1 < grid_size; ++k) g.points.push_back(lo + step * static_cast<double>(k));
  g.points.push_back(hi);
  return g;
}

struct IceCurves {
  std::vector<std::size_t> rows;             // source rows of the dataset
  std::vector<std::vector<double>> curves;   // curves[i][g]
};

struct PDSurface {
  std::vector<Grid1D> grids;  // one or two
  // Row-major over the grid cross; the first grid varies slowest.
  std::vector<double> values;
  std::optional<IceCurves> ice;                // 1-D only
  std::optional<std::vector<std::uint8_t>> mask;  // 2-D only; 1 = extrapolated
  double center = 0.0;

  bool is_2d() const { return grids.size() == 2; }
  std::vector<std::string> vars() const {
    std::vector<std::string> v;
    for (const auto& g : grids) v.push_back(g.var);
    return v;
  }
  double at(std::size_t a, std::size_t b = 0) const {
    return is_2d() ? values[a * grids[1].size() + b] : values[a];
  }
  bool masked(std::size_t a, std::size_t b) const {
    return mask && (*mask)[a * grids[1].size() + b] != 0;
  }
};

// Number of ICE curves to draw, or explicit source rows.
using IceSpec = std::variant<std::size_t, std::vector<std::size_t>>;

struct PdOptions {
  std::size_t grid_size = kDefaultGridSize;
  std::size_t nmax = kDefaultNmax;
  std::uint64_t seed = 0;
  IceSpec n_ice = kDefaultNIce;
  bool convex_hull = false;
  unsigned workers = 1;
};

// Grid means of `p` over the rows of `frame`, one value per cell of the cross
// of `grids`.
inline std::vector<double> pd_values(const Predictor& p, const FeatureFrame& frame,
                                     std::span<const Grid1D* const> grids, unsigned workers) {
  std::vector<GridAxis> axes;
  for (const auto* g : grids) axes.push_back(GridAxis{frame.index_of(g->var), g->points});
  return p.grid_means(frame, axes, workers);
}

inline IceCurves ice_curves(const Predictor& p, const Dataset& d, const Grid1D& grid,
                            std::vector<std::size_t> rows) {
  IceCurves ice;
  ice.rows = std::move(rows);
  if (ice.rows.empty()) return ice;
  for (auto r : ice.rows)
    if (r >= d.n_rows()) throw Error("ICE row index " + std::to_string(r) + " out of range");
  FeatureFrame frame = d.features(ice.rows);
  const std::size_t col = frame.index_of(grid.var);
  ice.curves.assign(ice.rows.size(), std::vector<double>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::fill(frame.columns[col].begin(), frame.columns[col].end(), grid.points[g]);
    const auto preds = p.predict(frame);
    for (std::size_t i = 0; i < preds.size(); ++i) ice.curves[i][g] = preds[i];
  }
  return ice;
}

inline PDSurface pd_1d(const Predictor& p, const Dataset& d, std::string_view var,
                       const PdOptions& opts = {}) {
  PDSurface s;
  s.grids.push_back(make_grid(d, var, opts.grid_size));
  const auto retained = sample_indices(d.n_rows(), SampleSpec{opts.nmax, opts.seed});
  const FeatureFrame frame = d.features(retained);
  const Grid1D* grids[] = {&s.grids[0]};
  s.values = pd_values(p, frame, grids, opts.workers);

  std::vector<std::size_t> ice_rows;
  if (const auto* count = std::get_if<std::size_t>(&opts.n_ice)) {
    if (*count >= retained.size()) {
      ice_rows = retained;
    } else if (*count > 0) {
      Rng rng(derive_seed(opts.seed, "ice"));
      for (auto pos : sample_without_replacement(retained.size(), *count, rng))
        ice_rows.push_back(retained[pos]);
    }
  } else {
    ice_rows = std::get<std::vector<std::size_t>>(opts.n_ice);
  }
  if (!ice_rows.empty()) s.ice = ice_curves(p, d, s.grids[0], std::move(ice_rows));
  return s;
}

// Cells of a numeric x numeric grid cross lying strictly outside the convex
// hull of the observed pairs (all rows of `d`).
inline std::vector<std::uint8_t> hull_mask(const Dataset& d, const Grid1D& a, const Grid1D& b) {
  std::vector<std::uint8_t> mask(a.size() * b.size(), 0);
  if (a.kind != ColumnKind::numeric || b.kind != ColumnKind::numeric) return mask;
  const auto xa = d.values(a.var);
  const auto xb = d.values(b.var);
  std::vector<Point> pts;
  pts.reserve(xa.size());
  for (std::size_t i = 0; i < xa.size(); ++i) pts.push_back({xa[i], xb[i]});
  const auto hull = convex_hull(std::move(pts));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      mask[i * b.size() + j] = point_in_hull({a.points[i], b.points[j]}, hull) ? 0 : 1;
  return mask;
}

inline PDSurface pd_2d(const Predictor& p, const Dataset& d, std::string_view var_a,
                       std::string_view var_b, const PdOptions& opts = {}) {
  if (var_a == var_b) throw Error("pd_2d needs two distinct variables");
  PDSurface s;
  s.grids.push_back(make_grid(d, var_a, opts.grid_size));
  s.grids.push_back(make_grid(d, var_b, opts.grid_size));
  const auto retained = sample_indices(d.n_rows(), SampleSpec{opts.nmax, opts.seed});
  const FeatureFrame frame = d.features(retained);
  const Grid1D* grids[] = {&s.grids[0], &s.grids[1]};
  s.values = pd_values(p, frame, grids, opts.workers);
  if (opts.convex_hull) s.mask = hull_mask(d, s.grids[0], s.grids[1]);
  return s;
}

}  // namespace vivid
