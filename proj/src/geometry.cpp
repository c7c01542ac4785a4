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

#include "colmix/geometry.hpp"

#include <utility>
#include <vector>

namespace colmix {

int64_t union_area(std::span<const Rect> rects) {
  std::vector<int> xs;
  xs.reserve(rects.size() * 2);
  for (const auto& r : rects) {
    if (r.empty()) continue;
    xs.push_back(r.x);
    xs.push_back(r.right());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  int64_t total = 0;
  std::vector<std::pair<int, int>> spans;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    const int x0 = xs[i];
    const int x1 = xs[i + 1];
    spans.clear();
    for (const auto& r : rects) {
      if (!r.empty() && r.x <= x0 && r.right() >= x1) spans.emplace_back(r.y, r.bottom());
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    int64_t covered = 0;
    int lo = spans.front().first;
    int hi = spans.front().second;
    for (const auto& [a, b] : spans) {
      if (a > hi) {
        covered += hi - lo;
        lo = a;
        hi = b;
      } else {
        hi = std::max(hi, b);
      }
    }
    covered += hi - lo;
    total += covered * (x1 - x0);
  }
  return total;
}

int64_t union_area(std::span<const Rect> rects, const Rect& clip) {
  std::vector<Rect> clipped;
  clipped.reserve(rects.size());
  for (const auto& r : rects) {
    Rect c = intersect(r, clip);
    if (!c.empty()) clipped.push_back(c);
  }
  return union_area(clipped);
}

}  // namespace colmix
