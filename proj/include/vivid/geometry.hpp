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

#include <vector>

#include "vivid/common.hpp"

namespace vivid {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline constexpr double kHullTolerance = 1e-9;

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain. Counter-clockwise, no collinear vertices; one or
// two vertices when the input is a point or lies on a line.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  // Entirely collinear input collapses to its two extreme points.
  if (hull.size() == 2 || (hull.size() > 2 && [&] {
        for (std::size_t i = 2; i < hull.size(); ++i)
          if (std::abs(cross(hull[0], hull[1], hull[i])) > 0) return false;
        return true;
      }())) {
    return {pts.front(), pts.back()};
  }
  return hull;
}

// Inside or on the boundary, with kHullTolerance on the cross-product sign.
inline bool point_in_hull(const Point& pt, const std::vector<Point>& hull) {
  if (hull.empty()) return false;
  if (hull.size() == 1)
    return std::abs(pt.x - hull[0].x) <= kHullTolerance && std::abs(pt.y - hull[0].y) <= kHullTolerance;
  if (hull.size() == 2) {
    const Point& a = hull[0];
    const Point& b = hull[1];
    if (std::abs(cross(a, b, pt)) > kHullTolerance) return false;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    const double t = ((pt.x - a.x) * dx + (pt.y - a.y) * dy) / len2;
    const double slack = kHullTolerance / std::sqrt(len2);
    return t >= -slack && t <= 1.0 + slack;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, pt) < -kHullTolerance) return false;
  }
  return true;
}

}  // namespace vivid
