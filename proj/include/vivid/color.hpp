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

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "vivid/common.hpp"

namespace vivid {

enum class ScaleKind { sequential_importance, sequential_interaction, diverging_prediction };

namespace palette {

// Single-hue blue ramp, light to dark.
inline const std::vector<std::string> kImportance = {
    "#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
    "#4292c6", "#2171b5", "#08519c", "#08306b"};

// Single-hue purple ramp, light to dark.
inline const std::vector<std::string> kInteraction = {
    "#fcfbfd", "#efedf5", "#dadaeb", "#bcbddc", "#9e9ac8",
    "#807dba", "#6a51a3", "#54278f", "#3f007d"};

// Dark blue (low) through yellow (middle) to dark red (high).
inline const std::vector<std::string> kPrediction = {
    "#08306b", "#4a90c2", "#ffee33", "#d6604d", "#67001f"};

// Fills for cluster hulls in network plots.
inline const std::vector<std::string> kGroups = {
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};

}  // namespace palette

namespace detail {

inline std::array<int, 3> parse_hex(const std::string& hex) {
  if (hex.size() != 7 || hex[0] != '#') throw Error("bad color '" + hex + "'");
  auto nibble = [&](char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error("bad color '" + hex + "'");
  };
  std::array<int, 3> rgb{};
  for (int k = 0; k < 3; ++k) rgb[k] = nibble(hex[1 + 2 * k]) * 16 + nibble(hex[2 + 2 * k]);
  return rgb;
}

inline std::string to_hex(const std::array<int, 3>& rgb) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace detail

struct ColorScale {
  ScaleKind kind = ScaleKind::sequential_importance;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::string> stops;

  // Values outside [lo, hi] take the nearest endpoint color.
  std::string color(double v) const {
    if (std::isnan(v)) v = lo;
    const double t = (std::clamp(v, lo, hi) - lo) / (hi - lo);
    const double pos = t * static_cast<double>(stops.size() - 1);
    const auto k = std::min(static_cast<std::size_t>(pos), stops.size() - 1);
    if (k + 1 >= stops.size()) return stops.back();
    const double frac = pos - static_cast<double>(k);
    if (frac == 0.0) return stops[k];
    const auto a = detail::parse_hex(stops[k]);
    const auto b = detail::parse_hex(stops[k + 1]);
    std::array<int, 3> mix{};
    for (int c = 0; c < 3; ++c)
      mix[c] = static_cast<int>(std::lround(a[c] + (b[c] - a[c]) * frac));
    return detail::to_hex(mix);
  }
};

// Equal limits are widened by 0.5 on each side.
inline ColorScale make_scale(ScaleKind kind, double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error("color scale limits must be finite");
  if (lo > hi) throw Error("color scale lower limit exceeds upper limit");
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  ColorScale s{kind, lo, hi, {}};
  switch (kind) {
    case ScaleKind::sequential_importance: s.stops = palette::kImportance; break;
    case ScaleKind::sequential_interaction: s.stops = palette::kInteraction; break;
    case ScaleKind::diverging_prediction: s.stops = palette::kPrediction; break;
  }
  return s;
}

}  // namespace vivid
