// Copyright 2026 The vipguide Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vipguide/annotate.hpp"

#include <algorithm>
#include <variant>

namespace vipguide::annotate
{

void draw_box(
  pnm::RgbImage & image, const perception::BoundingBox & box, std::uint8_t r, std::uint8_t g,
  std::uint8_t b, int thickness)
{
  const int x1 = std::max(box.x1, 0);
  const int y1 = std::max(box.y1, 0);
  const int x2 = std::min(box.x2, image.width);
  const int y2 = std::min(box.y2, image.height);
  for (int y = y1; y < y2; ++y) {
    for (int x = x1; x < x2; ++x) {
      const bool edge = x < box.x1 + thickness || x >= box.x2 - thickness ||
                        y < box.y1 + thickness || y >= box.y2 - thickness;
      if (edge) {
        image.set(x, y, r, g, b);
      }
    }
  }
}

pnm::RgbImage render(const perception::PerceptionFrame & frame, const pipeline::GuidanceDecision & decision)
{
  const auto & depth = frame.depth;
  pnm::RgbImage image(depth.width, depth.height);
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const auto v = static_cast<std::uint8_t>(depth.at(x, y) >> 8);
      image.set(x, y, v, v, v);
    }
  }
  if (const auto * h = std::get_if<local_planner::Heading>(&decision.outcome)) {
    for (const auto & p : decision.profiles) {
      if (p.partition.index == h->partition) {
        draw_box(image, {p.partition.x_start, 0, p.partition.x_end, depth.height}, 0, 255, 0);
      }
    }
  }
  for (const auto & a : decision.assessments) {
    if (a.severity == local_planner::Severity::danger) {
      draw_box(image, a.bbox, 255, 0, 0);
    } else if (a.severity == local_planner::Severity::warning) {
      draw_box(image, a.bbox, 255, 255, 0);
    }
  }
  if (decision.vip_bbox) {
    draw_box(image, *decision.vip_bbox, 0, 0, 255);
  }
  return image;
}

}  // namespace vipguide::annotate
