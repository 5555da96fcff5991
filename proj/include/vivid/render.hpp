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

// SVG displays: VIVI heatmap, VIVI network, univariate PDP grid,
// generalized pairs PDP and zen PDP.
//
// Element ids follow a fixed scheme so documents can be checked
// structurally: cell-i-j (heatmap), node-<var>, edge-<u>-<v>, panel-k,
// legend-importance / legend-interaction / legend-prediction, cluster-<g>.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vivid/color.hpp"
#include "vivid/dataset.hpp"
#include "vivid/geometry.hpp"
#include "vivid/pdp.hpp"
#include "vivid/svg.hpp"
#include "vivid/vivi_matrix.hpp"
#include "vivid/zenpath.hpp"

namespace vivid {

struct PlotSpec {
  double width = 800;
  double height = 800;
  double angle = 0;  // x-label rotation, degrees
  std::string title;
};

using Limits = std::optional<std::pair<double, double>>;

namespace detail {

inline std::pair<double, double> range_of(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

inline ColorScale scale_from(ScaleKind kind, const Limits& lims, const std::vector<double>& data) {
  const auto [lo, hi] = lims ? *lims : range_of(data);
  return make_scale(kind, lo, hi);
}

inline void add_legend(svg::Document& doc, const std::string& name, const std::string& heading,
                       const ColorScale& scale, double x, double y, double w = 18, double h = 140) {
  const std::string grad = "grad-" + name;
  std::string stops;
  // Offsets must ascend, so walk the stops from the high end (top of the bar).
  const std::size_t n = scale.stops.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double off = n == 1 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n - 1);
    stops += "<stop offset=\"" + svg::num(off) + "%\" stop-color=\"" + scale.stops[n - 1 - k] + "\"/>";
  }
  doc.defs("<linearGradient id=\"" + grad + "\" x1=\"0\" y1=\"0\" x2=\"0\" y2=\"1\">" + stops +
           "</linearGradient>\n");
  doc.open_group("id=\"legend-" + name + "\" data-lo=\"" + svg::label(scale.lo) + "\" data-hi=\"" +
                 svg::label(scale.hi) + "\"");
  doc.text(x, y - 8, heading, "font-weight=\"bold\"");
  doc.rect(x, y, w, h, "fill=\"url(#" + grad + ")\" stroke=\"#444444\" stroke-width=\"0.5\"");
  doc.text(x + w + 4, y + 8, svg::label(scale.hi));
  doc.text(x + w + 4, y + h, svg::label(scale.lo));
  doc.close_group();
}

inline void add_title(svg::Document& doc, const PlotSpec& spec) {
  if (!spec.title.empty())
    doc.text(spec.width / 2, 20, spec.title, "text-anchor=\"middle\" font-size=\"14\"");
}

// Maps grid and data values onto [0, 1] so grid value k sits at the centre
// of band k of G equal bands.
struct AxisMap {
  ColumnKind kind = ColumnKind::numeric;
  double min = 0.0;
  double max = 0.0;
  std::size_t bands = 1;

  explicit AxisMap(const Grid1D& g) : kind(g.kind), bands(std::max<std::size_t>(1, g.size())) {
    if (!g.points.empty()) {
      min = g.points.front();
      max = g.points.back();
    }
  }

  double pos(double v) const {
    const double b = static_cast<double>(bands);
    if (kind == ColumnKind::categorical) return (v + 0.5) / b;
    if (max == min) return 0.5;
    return (0.5 + (v - min) / (max - min) * (b - 1.0)) / b;
  }
  double band_lo(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(bands); }
  double band_hi(std::size_t k) const { return static_cast<double>(k + 1) / static_cast<double>(bands); }
};

struct Box {
  double x, y, w, h;
  double px(double t) const { return x + t * w; }
  double py(double t) const { return y + (1.0 - t) * h; }  // t = 0 at the bottom
};

inline const PDSurface* find_1d(const std::vector<PDSurface>& surfaces, const std::string& var) {
  for (const auto& s : surfaces)
    if (!s.is_2d() && s.grids[0].var == var) return &s;
  return nullptr;
}

inline const PDSurface* find_2d(const std::vector<PDSurface>& surfaces, const std::string& a,
                                const std::string& b) {
  for (const auto& s : surfaces)
    if (s.is_2d() && ((s.grids[0].var == a && s.grids[1].var == b) ||
                      (s.grids[0].var == b && s.grids[1].var == a)))
      return &s;
  return nullptr;
}

// Bivariate surface as filled bands, x_var horizontal. Masked cells are
// left out.
inline void draw_bi_cells(svg::Document& doc, const PDSurface& s, const std::string& x_var,
                          const Box& box, const ColorScale& scale) {
  const bool x_first = s.grids[0].var == x_var;
  const Grid1D& gx = s.grids[x_first ? 0 : 1];
  const Grid1D& gy = s.grids[x_first ? 1 : 0];
  const AxisMap mx(gx), my(gy);
  for (std::size_t ix = 0; ix < gx.size(); ++ix) {
    for (std::size_t iy = 0; iy < gy.size(); ++iy) {
      const std::size_t a = x_first ? ix : iy, b = x_first ? iy : ix;
      if (s.masked(a, b)) continue;
      const double v = s.at(a, b);
      const double x0 = box.px(mx.band_lo(ix)), x1 = box.px(mx.band_hi(ix));
      const double y0 = box.py(my.band_hi(iy)), y1 = box.py(my.band_lo(iy));
      doc.rect(x0, y0, x1 - x0, y1 - y0,
               "class=\"pd-cell\" fill=\"" + scale.color(v) + "\" data-value=\"" + svg::label(v) + "\"");
    }
  }
}

// One univariate panel: ICE segments colored by the prediction scale, the
// partial dependence drawn in black on top.
inline void draw_uni_panel(svg::Document& doc, const PDSurface& s, const Box& box,
                           std::pair<double, double> yr, const ColorScale& scale) {
  const Grid1D& g = s.grids[0];
  const AxisMap mx(g);
  auto ypos = [&](double v) {
    const double t = yr.second > yr.first ? (v - yr.first) / (yr.second - yr.first) : 0.5;
    return box.py(std::clamp(t, 0.0, 1.0));
  };
  auto xs = [&](std::size_t k) { return box.px(mx.pos(g.points[k])); };
  const double half = box.w / static_cast<double>(2 * mx.bands) * 0.6;
  if (s.ice) {
    for (const auto& curve : s.ice->curves) {
      if (g.size() == 1) {
        doc.line(xs(0) - half, ypos(curve[0]), xs(0) + half, ypos(curve[0]),
                 "class=\"ice\" stroke=\"" + scale.color(curve[0]) + "\" stroke-width=\"1\"");
        continue;
      }
      for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        const double mid = (curve[k] + curve[k + 1]) / 2.0;
        doc.line(xs(k), ypos(curve[k]), xs(k + 1), ypos(curve[k + 1]),
                 "class=\"ice\" stroke=\"" + scale.color(mid) + "\" stroke-width=\"1\"");
      }
    }
  }
  std::vector<std::pair<double, double>> pts;
  if (g.size() == 1) {
    pts = {{xs(0) - half, ypos(s.values[0])}, {xs(0) + half, ypos(s.values[0])}};
  } else {
    for (std::size_t k = 0; k < g.size(); ++k) pts.emplace_back(xs(k), ypos(s.values[k]));
  }
  doc.polyline(pts, "class=\"pdp\" stroke=\"#000000\" stroke-width=\"2\"");
}

inline void frame(svg::Document& doc, const Box& box) {
  doc.rect(box.x, box.y, box.w, box.h, "class=\"frame\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.75\"");
}

inline void extend(std::vector<double>& out, const PDSurface& s, bool with_ice) {
  out.insert(out.end(), s.values.begin(), s.values.end());
  if (with_ice && s.ice)
    for (const auto& c : s.ice->curves) out.insert(out.end(), c.begin(), c.end());
}

inline std::pair<double, double> widen(std::pair<double, double> r) {
  if (r.first == r.second) return {r.first - 0.5, r.second + 0.5};
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Heatmap

inline std::string render_heatmap(const ViviMatrix& v, const Limits& imp_lims, const Limits& int_lims,
                                  const PlotSpec& spec = {}) {
  v.validate();
  const std::size_t m = v.size();
  std::vector<double> diag, off;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) (i == j ? diag : off).push_back(v.values[i][j]);
  const auto imp_scale = detail::scale_from(ScaleKind::sequential_importance, imp_lims, diag);
  const auto int_scale = detail::scale_from(ScaleKind::sequential_interaction, int_lims, off);

  svg::Document doc(spec.width, spec.height);
  detail::add_title(doc, spec);
  const double left = 110, top = spec.title.empty() ? 20 : 40, right = 150, bottom = 110;
  const double cell = std::max(1.0, std::min((spec.width - left - right) / static_cast<double>(m),
                                             (spec.height - top - bottom) / static_cast<double>(m)));
  doc.open_group("id=\"cells\"");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double val = v.values[i][j];
      const auto& scale = i == j ? imp_scale : int_scale;
      doc.rect(left + static_cast<double>(j) * cell, top + static_cast<double>(i) * cell, cell, cell,
               "id=\"cell-" + std::to_string(i) + "-" + std::to_string(j) + "\" fill=\"" + scale.color(val) +
                   "\" stroke=\"#ffffff\" stroke-width=\"1\" data-value=\"" + svg::label(val) + "\"");
    }
  }
  doc.close_group();
  for (std::size_t i = 0; i < m; ++i)
    doc.text(left - 6, top + (static_cast<double>(i) + 0.5) * cell + 4, v.vars[i], "text-anchor=\"end\"");
  for (std::size_t j = 0; j < m; ++j) {
    const double x = left + (static_cast<double>(j) + 0.5) * cell;
    const double y = top + static_cast<double>(m) * cell + 14;
    if (spec.angle == 0)
      doc.text(x, y, v.vars[j], "text-anchor=\"middle\"");
    else
      doc.text(x, y, v.vars[j],
               "text-anchor=\"end\" transform=\"rotate(" + svg::num(-spec.angle) + " " + svg::num(x) + " " +
                   svg::num(y) + ")\"");
  }
  const double lx = left + static_cast<double>(m) * cell + 30;
  detail::add_legend(doc, "importance", "Vimp", imp_scale, lx, top + 20);
  detail::add_legend(doc, "interaction", "Vint", int_scale, lx, top + 210);
  return doc.str();
}

// ---------------------------------------------------------------------------
// Network

enum class LayoutKind { circle, star, custom };

struct NetworkOptions {
  std::optional<double> int_threshold;  // edges with interaction <= threshold are dropped
  bool remove_node = false;             // drop nodes left without edges
  std::optional<std::map<std::string, int>> cluster;
  LayoutKind layout = LayoutKind::circle;
  std::vector<Point> coords;  // custom layout, one per matrix variable
  Limits imp_lims;
  Limits int_lims;
};

inline std::string render_network(const ViviMatrix& v, const NetworkOptions& opts, const PlotSpec& spec = {}) {
  v.validate();
  const std::size_t m = v.size();
  if (opts.layout == LayoutKind::custom && opts.coords.size() != m)
    throw Error("custom layout needs " + std::to_string(m) + " coordinates, got " +
                std::to_string(opts.coords.size()));

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (!opts.int_threshold || v.values[i][j] > *opts.int_threshold) edges.emplace_back(i, j);
  std::vector<bool> keep(m, true);
  if (opts.remove_node) {
    std::vector<bool> touched(m, false);
    for (const auto& [i, j] : edges) touched[i] = touched[j] = true;
    keep = touched;
  }
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < m; ++i)
    if (keep[i]) nodes.push_back(i);
  if (opts.cluster)
    for (auto i : nodes)
      if (!opts.cluster->count(v.vars[i]))
        throw Error("cluster membership missing variable '" + v.vars[i] + "'");

  std::vector<double> diag, off;
  for (std::size_t i = 0; i < m; ++i) diag.push_back(v.values[i][i]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) off.push_back(v.values[i][j]);
  const auto imp_scale = detail::scale_from(ScaleKind::sequential_importance, opts.imp_lims, diag);
  const auto int_scale = detail::scale_from(ScaleKind::sequential_interaction, opts.int_lims, off);

  svg::Document doc(spec.width, spec.height);
  detail::add_title(doc, spec);
  const double legend_w = 150;
  const double cx = (spec.width - legend_w) / 2, cy = spec.height / 2;
  const double radius = std::max(10.0, std::min(cx, cy) - 70);

  std::vector<Point> pos(m);
  if (opts.layout == LayoutKind::custom) {
    double xmin = opts.coords[0].x, xmax = xmin, ymin = opts.coords[0].y, ymax = ymin;
    for (const auto& p : opts.coords) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double tx = xmax > xmin ? (opts.coords[i].x - xmin) / (xmax - xmin) : 0.5;
      const double ty = ymax > ymin ? (opts.coords[i].y - ymin) / (ymax - ymin) : 0.5;
      pos[i] = {cx - radius + 2 * radius * tx, cy + radius - 2 * radius * ty};
    }
  } else {
    std::size_t ring_start = 0;
    if (opts.layout == LayoutKind::star && !nodes.empty()) {
      pos[nodes[0]] = {cx, cy};
      ring_start = 1;
    }
    const std::size_t ring = nodes.size() - std::min(nodes.size(), ring_start);
    for (std::size_t k = ring_start; k < nodes.size(); ++k) {
      // Clockwise from twelve o'clock (SVG y grows downward).
      const double theta = -std::numbers::pi / 2 +
                           2 * std::numbers::pi * static_cast<double>(k - ring_start) / static_cast<double>(ring);
      pos[nodes[k]] = {cx + radius * std::cos(theta), cy + radius * std::sin(theta)};
    }
  }
  auto node_radius = [&](std::size_t i) {
    const double t = (std::clamp(v.values[i][i], imp_scale.lo, imp_scale.hi) - imp_scale.lo) /
                     (imp_scale.hi - imp_scale.lo);
    return 8.0 + 18.0 * t;
  };

  if (opts.cluster) {
    std::map<int, std::vector<std::size_t>> groups;
    for (auto i : nodes) groups[opts.cluster->at(v.vars[i])].push_back(i);
    std::size_t colour = 0;
    for (const auto& [gid, members] : groups) {
      std::vector<Point> cloud;
      for (auto i : members) {
        const double r = node_radius(i) + 12;
        for (int k = 0; k < 16; ++k) {
          const double a = 2 * std::numbers::pi * k / 16.0;
          cloud.push_back({pos[i].x + r * std::cos(a), pos[i].y + r * std::sin(a)});
        }
      }
      std::vector<std::pair<double, double>> poly;
      for (const auto& p : convex_hull(cloud)) poly.emplace_back(p.x, p.y);
      const auto& fill = palette::kGroups[colour++ % palette::kGroups.size()];
      doc.polygon(poly, "id=\"cluster-" + std::to_string(gid) + "\" class=\"cluster\" fill=\"" + fill +
                            "\" fill-opacity=\"0.15\" stroke=\"" + fill + "\" stroke-width=\"1\"");
    }
  }

  doc.open_group("id=\"edges\"");
  for (const auto& [i, j] : edges) {
    if (!keep[i] || !keep[j]) continue;
    const double w = v.values[i][j];
    const double t = (std::clamp(w, int_scale.lo, int_scale.hi) - int_scale.lo) / (int_scale.hi - int_scale.lo);
    doc.line(pos[i].x, pos[i].y, pos[j].x, pos[j].y,
             "id=\"edge-" + svg::id_safe(v.vars[i]) + "-" + svg::id_safe(v.vars[j]) + "\" stroke=\"" +
                 int_scale.color(w) + "\" stroke-width=\"" + svg::num(1.0 + 7.0 * t) + "\" data-value=\"" +
                 svg::label(w) + "\"");
  }
  doc.close_group();
  doc.open_group("id=\"nodes\"");
  for (auto i : nodes) {
    doc.circle(pos[i].x, pos[i].y, node_radius(i),
               "id=\"node-" + svg::id_safe(v.vars[i]) + "\" fill=\"" + imp_scale.color(v.values[i][i]) +
                   "\" stroke=\"#333333\" stroke-width=\"1\" data-value=\"" + svg::label(v.values[i][i]) + "\"");
    doc.text(pos[i].x, pos[i].y - node_radius(i) - 4, v.vars[i], "text-anchor=\"middle\"");
  }
  doc.close_group();
  const double lx = spec.width - legend_w + 30;
  detail::add_legend(doc, "importance", "Vimp", imp_scale, lx, 60);
  detail::add_legend(doc, "interaction", "Vint", int_scale, lx, 250);
  return doc.str();
}

// ---------------------------------------------------------------------------
// Univariate PDP grid

inline std::string render_pdp_vars(const std::vector<PDSurface>& surfaces, const PlotSpec& spec = {},
                                   const Limits& fitlims = std::nullopt,
                                   const std::vector<std::string>& pal = {}) {
  if (surfaces.empty()) throw Error("no surfaces to plot");
  std::vector<double> drawn;
  for (const auto& s : surfaces) {
    if (s.is_2d()) throw Error("pdp-vars takes univariate surfaces only");
    detail::extend(drawn, s, true);
  }
  const auto yr = detail::widen(detail::range_of(drawn));
  auto scale = detail::scale_from(ScaleKind::diverging_prediction, fitlims, drawn);
  if (!pal.empty()) scale.stops = pal;

  svg::Document doc(spec.width, spec.height);
  detail::add_title(doc, spec);
  const std::size_t n = surfaces.size();
  const auto ncol = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const std::size_t nrow = (n + ncol - 1) / ncol;
  const double legend_w = 110, top = spec.title.empty() ? 15 : 35, margin = 15;
  const double pw = (spec.width - legend_w - margin) / static_cast<double>(ncol);
  const double ph = (spec.height - top - margin) / static_cast<double>(nrow);
  for (std::size_t k = 0; k < n; ++k) {
    const double x0 = margin + static_cast<double>(k % ncol) * pw;
    const double y0 = top + static_cast<double>(k / ncol) * ph;
    const detail::Box box{x0 + 40, y0 + 10, pw - 55, ph - 45};
    doc.open_group("id=\"panel-" + std::to_string(k) + "\" data-var=\"" + svg::escape(surfaces[k].grids[0].var) + "\"");
    detail::frame(doc, box);
    detail::draw_uni_panel(doc, surfaces[k], box, yr, scale);
    doc.text(box.x + box.w / 2, box.y + box.h + 28, surfaces[k].grids[0].var, "text-anchor=\"middle\"");
    doc.text(box.x - 4, box.y + 8, svg::label(yr.second), "text-anchor=\"end\" font-size=\"9\"");
    doc.text(box.x - 4, box.y + box.h, svg::label(yr.first), "text-anchor=\"end\" font-size=\"9\"");
    const auto& g = surfaces[k].grids[0];
    const std::string lo = g.kind == ColumnKind::categorical ? g.labels.front() : svg::label(g.points.front());
    const std::string hi = g.kind == ColumnKind::categorical ? g.labels.back() : svg::label(g.points.back());
    doc.text(box.x, box.y + box.h + 12, lo, "font-size=\"9\"");
    doc.text(box.x + box.w, box.y + box.h + 12, hi, "text-anchor=\"end\" font-size=\"9\"");
    doc.close_group();
  }
  detail::add_legend(doc, "prediction", "y-hat", scale, spec.width - legend_w + 25, top + 30);
  return doc.str();
}

// ---------------------------------------------------------------------------
// Generalized pairs PDP

enum class FitLims { pdp, all };

// `fitted` holds the model's prediction for every row of `d` and colors the
// lower-triangle scatterplots.
inline std::string render_pdp_pairs(const Dataset& d, const std::vector<std::string>& vars,
                                    const std::vector<PDSurface>& uni, const std::vector<PDSurface>& bi,
                                    std::span<const double> fitted, FitLims fitlims,
                                    const PlotSpec& spec = {}) {
  const std::size_t m = vars.size();
  if (m == 0) throw Error("no variables to plot");
  if (fitted.size() != d.n_rows()) throw Error("need one fitted value per data row");
  std::vector<const PDSurface*> uni_of(m);
  for (std::size_t i = 0; i < m; ++i) {
    uni_of[i] = detail::find_1d(uni, vars[i]);
    if (!uni_of[i]) throw Error("missing univariate surface for '" + vars[i] + "'");
  }
  std::vector<double> pd_vals, all_vals, uni_vals;
  for (std::size_t i = 0; i < m; ++i) {
    detail::extend(pd_vals, *uni_of[i], false);
    detail::extend(all_vals, *uni_of[i], true);
    detail::extend(uni_vals, *uni_of[i], true);
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto* s = detail::find_2d(bi, vars[i], vars[j]);
      if (!s) throw Error("missing pair surface for (" + vars[i] + ", " + vars[j] + ")");
      detail::extend(pd_vals, *s, false);
      detail::extend(all_vals, *s, false);
    }
  }
  all_vals.insert(all_vals.end(), fitted.begin(), fitted.end());
  const auto lims = detail::range_of(fitlims == FitLims::pdp ? pd_vals : all_vals);
  const auto scale = make_scale(ScaleKind::diverging_prediction, lims.first, lims.second);
  const auto yr = detail::widen(detail::range_of(uni_vals));

  svg::Document doc(spec.width, spec.height);
  detail::add_title(doc, spec);
  const double legend_w = 110, top = spec.title.empty() ? 15 : 35, margin = 15;
  const double cell = std::min((spec.width - legend_w - margin) / static_cast<double>(m),
                               (spec.height - top - margin) / static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const detail::Box box{margin + static_cast<double>(j) * cell + 3, top + static_cast<double>(i) * cell + 3,
                            cell - 6, cell - 6};
      const char* role = i == j ? "diag" : (i < j ? "upper" : "lower");
      doc.open_group("id=\"panel-" + std::to_string(k) + "\" class=\"" + role + "\"");
      if (i == j) {
        detail::draw_uni_panel(doc, *uni_of[i], box, yr, scale);
        doc.text(box.x + 4, box.y + 12, vars[i], "font-weight=\"bold\"");
      } else if (i < j) {
        detail::draw_bi_cells(doc, *detail::find_2d(bi, vars[i], vars[j]), vars[j], box, scale);
      } else {
        const detail::AxisMap mx(uni_of[j]->grids[0]), my(uni_of[i]->grids[0]);
        const auto xs = d.values(vars[j]);
        const auto ys = d.values(vars[i]);
        for (std::size_t r = 0; r < d.n_rows(); ++r)
          doc.circle(box.px(mx.pos(xs[r])), box.py(my.pos(ys[r])), 1.6,
                     "class=\"pt\" fill=\"" + scale.color(fitted[r]) + "\"");
      }
      detail::frame(doc, box);
      doc.close_group();
    }
  }
  detail::add_legend(doc, "prediction", "y-hat", scale, spec.width - legend_w + 25, top + 30);
  return doc.str();
}

// ---------------------------------------------------------------------------
// Zen PDP

// Staircase layout: panel 0 at the top-left, later panels alternately to the
// right of and below their predecessor, so consecutive panels share the
// common variable's axis. Each sequence starts a new staircase underneath.
inline std::string render_pdp_zen(const Dataset& d, const ZPath& zp, const std::vector<PDSurface>& bi,
                                  const PlotSpec& spec = {}, const Limits& fitlims = std::nullopt) {
  struct Placed {
    std::string x_var, y_var;
    const PDSurface* surface;
    std::size_t col, row;
  };
  std::vector<Placed> panels;
  std::size_t row_base = 0, max_col = 0, total_rows = 0;
  std::vector<double> vals;
  for (const auto& seq : zp.sequences) {
    if (seq.size() < 2) throw Error("zpath sequences need at least two variables");
    std::size_t col = 0, row = row_base;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      const auto* s = detail::find_2d(bi, seq[k], seq[k + 1]);
      if (!s) throw Error("missing pair surface for (" + seq[k] + ", " + seq[k + 1] + ")");
      if (k > 0) (k % 2 == 1 ? col : row) += 1;
      const bool even = k % 2 == 0;
      panels.push_back({even ? seq[k] : seq[k + 1], even ? seq[k + 1] : seq[k], s, col, row});
      detail::extend(vals, *s, false);
      max_col = std::max(max_col, col);
    }
    row_base = row + 1;
    total_rows = row_base;
  }
  const auto scale = detail::scale_from(ScaleKind::diverging_prediction, fitlims, vals);

  svg::Document doc(spec.width, spec.height);
  detail::add_title(doc, spec);
  const double legend_w = 110, top = spec.title.empty() ? 15 : 35, margin = 15;
  const double cell = std::min((spec.width - legend_w - margin) / static_cast<double>(max_col + 1),
                               (spec.height - top - margin) / static_cast<double>(total_rows));
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    const detail::Box box{margin + static_cast<double>(p.col) * cell + 18,
                          top + static_cast<double>(p.row) * cell + 4, cell - 24, cell - 24};
    doc.open_group("id=\"panel-" + std::to_string(k) + "\" data-x=\"" + svg::escape(p.x_var) + "\" data-y=\"" +
                   svg::escape(p.y_var) + "\"");
    detail::draw_bi_cells(doc, *p.surface, p.x_var, box, scale);
    detail::frame(doc, box);
    const bool x_first = p.surface->grids[0].var == p.x_var;
    const detail::AxisMap mx(p.surface->grids[x_first ? 0 : 1]), my(p.surface->grids[x_first ? 1 : 0]);
    std::set<std::string> seen;
    for (double xv : d.values(p.x_var)) {
      const double x = box.px(mx.pos(xv));
      if (!seen.insert(svg::num(x)).second) continue;
      doc.line(x, box.y + box.h, x, box.y + box.h + 5, "class=\"rug\" stroke=\"#333333\" stroke-width=\"0.5\"");
    }
    seen.clear();
    for (double yv : d.values(p.y_var)) {
      const double y = box.py(my.pos(yv));
      if (!seen.insert(svg::num(y)).second) continue;
      doc.line(box.x - 5, y, box.x, y, "class=\"rug\" stroke=\"#333333\" stroke-width=\"0.5\"");
    }
    doc.text(box.x + box.w / 2, box.y + box.h + 16, p.x_var, "text-anchor=\"middle\"");
    const double ly = box.y + box.h / 2;
    doc.text(box.x - 8, ly, p.y_var,
             "text-anchor=\"middle\" transform=\"rotate(-90 " + svg::num(box.x - 8) + " " + svg::num(ly) + ")\"");
    doc.close_group();
  }
  detail::add_legend(doc, "prediction", "y-hat", scale, spec.width - legend_w + 25, top + 30);
  return doc.str();
}

}  // namespace vivid
