/**
 * Copyright 2026 The ColMix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COLMIX_GEOMETRY_HPP_
#define COLMIX_GEOMETRY_HPP_

#include <algorithm>
#include <cstdint>
#include <span>

namespace colmix {

/// Integer pixel rectangle, half-open: [x, x + w) x [y, y + h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  constexpr int right() const { return x + w; }
  constexpr int bottom() const { return y + h; }
  constexpr int64_t area() const { return w > 0 && h > 0 ? int64_t{w} * h : 0; }
  constexpr bool empty() const { return w <= 0 || h <= 0; }

  constexpr bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  constexpr bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }

  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

struct Point {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(const Point&, const Point&) = default;
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

/// Intersection of two rectangles; empty (w or h == 0) when disjoint.
constexpr Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Rect{x0, y0, 0, 0};
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

constexpr Rect translate(const Rect& r, int dx, int dy) { return Rect{r.x + dx, r.y + dy, r.w, r.h}; }

/// Exact area of the union of rectangles, optionally restricted to `clip`.
/// Uses coordinate compression, O(n^2 log n).
int64_t union_area(std::span<const Rect> rects);
int64_t union_area(std::span<const Rect> rects, const Rect& clip);

}  // namespace colmix

#endif  // COLMIX_GEOMETRY_HPP_
