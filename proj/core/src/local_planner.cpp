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

#include "vipguide/local_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <tuple>

#include "vipguide/errors.hpp"

namespace vipguide::local_planner
{

std::vector<Partition> partition_bounds(int width, int n)
{
  if (n < 1 || n % 2 == 0) {
    throw DomainError("partition count must be a positive odd number, got " + std::to_string(n));
  }
  if (width < n) {
    throw DomainError("frame narrower than the partition count");
  }
  std::vector<Partition> parts;
  parts.reserve(static_cast<std::size_t>(n));
  const int base = width / n;
  const int extra = width % n;
  int x = 0;
  for (int i = 0; i < n; ++i) {
    const int w = base + (i < extra ? 1 : 0);
    parts.push_back({i, x, x + w});
    x += w;
  }
  return parts;
}

int partition_of(std::span<const Partition> partitions, int x)
{
  for (const auto & p : partitions) {
    if (x < p.x_end) {
      return p.index;
    }
  }
  return partitions.back().index;
}

PartitionDepth mean_partition_depth(
  const DepthMap & depth, const Partition & partition, const BitGrid * exclude)
{
  const int x0 = std::max(0, partition.x_start);
  const int x1 = std::min(depth.width, partition.x_end);
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  for (int y = 0; y < depth.height; ++y) {
    const std::uint16_t * row = depth.values.data() + static_cast<std::size_t>(y) * depth.width;
    if (exclude == nullptr) {
      for (int x = x0; x < x1; ++x) {
        sum += row[x];
      }
      count += static_cast<std::uint64_t>(std::max(0, x1 - x0));
    } else {
      const std::uint8_t * mask = exclude->bits.data() + static_cast<std::size_t>(y) * exclude->width;
      for (int x = x0; x < x1; ++x) {
        if (mask[x] == 0) {
          sum += row[x];
          ++count;
        }
      }
    }
  }
  if (count == 0) {
    return {0.0, 0, true};
  }
  return {static_cast<double>(sum) / static_cast<double>(count), count, false};
}

FreeSpace free_space(
  std::span<const BoundingBox> boxes, std::span<const std::optional<double>> distances,
  double d_filter, int width, std::span<const Partition> partitions)
{
  if (boxes.size() != distances.size()) {
    throw DomainError("free_space: one distance per box is required");
  }

  // Obstacles within range, sorted along the x axis.
  std::vector<Segment> occupied;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (distances[i] && *distances[i] > d_filter) {
      continue;
    }
    const int x1 = std::clamp(boxes[i].x1, 0, width);
    const int x2 = std::clamp(boxes[i].x2, 0, width);
    if (x1 < x2) {
      occupied.push_back({x1, x2});
    }
  }
  std::sort(occupied.begin(), occupied.end(), [](const Segment & a, const Segment & b) {
    return std::tie(a.x_start, a.x_end) < std::tie(b.x_start, b.x_end);
  });

  // Keep the starting box of an overlapping run and extend it until the
  // overlap ends; the gaps between runs are the free coordinates.
  FreeSpace out;
  int cursor = 0;
  std::size_t i = 0;
  while (i < occupied.size()) {
    const int run_start = occupied[i].x_start;
    int run_end = occupied[i].x_end;
    ++i;
    while (i < occupied.size() && occupied[i].x_start <= run_end) {
      run_end = std::max(run_end, occupied[i].x_end);
      ++i;
    }
    if (run_start > cursor) {
      out.frame_segments.push_back({cursor, run_start});
    }
    cursor = std::max(cursor, run_end);
  }
  if (cursor < width) {
    out.frame_segments.push_back({cursor, width});
  }

  // Segments spanning partition borders contribute to each side.
  out.partition_segments.resize(partitions.size());
  out.max_free_width.assign(partitions.size(), 0);
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    for (const auto & seg : out.frame_segments) {
      const int s = std::max(seg.x_start, partitions[p].x_start);
      const int e = std::min(seg.x_end, partitions[p].x_end);
      if (s < e) {
        out.partition_segments[p].push_back({s, e});
        out.max_free_width[p] = std::max(out.max_free_width[p], e - s);
      }
    }
  }
  return out;
}

std::string_view to_string(Severity s)
{
  switch (s) {
    case Severity::danger:
      return "danger";
    case Severity::warning:
      return "warning";
    case Severity::clear:
      return "clear";
  }
  return "clear";
}

Severity classify_obstacle(double distance_m, double safety_m, double danger_mult, double warning_mult)
{
  if (distance_m <= danger_mult * safety_m) {
    return Severity::danger;
  }
  if (distance_m <= warning_mult * safety_m) {
    return Severity::warning;
  }
  return Severity::clear;
}

std::string_view to_string(EdgeStatus s)
{
  switch (s) {
    case EdgeStatus::safe:
      return "safe";
    case EdgeStatus::warn_left:
      return "warn_left";
    case EdgeStatus::warn_right:
      return "warn_right";
    case EdgeStatus::warn_both:
      return "warn_both";
    case EdgeStatus::unknown:
      return "unknown";
  }
  return "unknown";
}

namespace
{

bool probe_is_safe(const BitGrid & road, int x0, int x1, int y0, int y1, int threshold)
{
  x0 = std::clamp(x0, 0, road.width);
  x1 = std::clamp(x1, 0, road.width);
  y0 = std::clamp(y0, 0, road.height);
  y1 = std::clamp(y1, 0, road.height);
  if (x0 >= x1 || y0 >= y1) {
    return false;
  }
  std::int64_t road_pixels = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      road_pixels += road.at(x, y) ? 1 : 0;
    }
  }
  const std::int64_t count = static_cast<std::int64_t>(x1 - x0) * (y1 - y0);
  // mean(255 * road) > threshold, kept in integers.
  return road_pixels * 255 > static_cast<std::int64_t>(threshold) * count;
}

}  // namespace

EdgeStatus road_edge_check(const BoundingBox & vip, const BitGrid * road, int box_px, int threshold)
{
  if (road == nullptr) {
    return EdgeStatus::unknown;
  }
  const bool left_ok = probe_is_safe(*road, vip.x1 - box_px, vip.x1, vip.y2 - box_px, vip.y2, threshold);
  const bool right_ok = probe_is_safe(*road, vip.x2, vip.x2 + box_px, vip.y2 - box_px, vip.y2, threshold);
  if (left_ok && right_ok) {
    return EdgeStatus::safe;
  }
  if (!left_ok && !right_ok) {
    return EdgeStatus::warn_both;
  }
  return left_ok ? EdgeStatus::warn_right : EdgeStatus::warn_left;
}

double heading_angle(const Partition & partition, int width, double hfov_deg)
{
  const double centre = 0.5 * (partition.x_start + partition.x_end);
  return (centre - 0.5 * width) / width * hfov_deg;
}

int width_threshold(const BoundingBox & vip, double margin)
{
  const double raw = margin * vip.width();
  const double nearest = std::round(raw);
  // 1.2 * 50 is 60.000000000000007 in binary floating point.
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw)) {
    return static_cast<int>(nearest);
  }
  return static_cast<int>(std::ceil(raw));
}

Outcome decide(
  std::span<const PartitionProfile> profiles, int vip_partition, int min_width, double hfov_deg)
{
  if (profiles.empty()) {
    return RerouteNeeded{};
  }
  const int centre = static_cast<int>(profiles.size()) / 2;
  std::vector<std::size_t> order(profiles.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    const int index = profiles[i].partition.index;
    return std::make_tuple(
      profiles[i].h_score, index == vip_partition ? 0 : 1, std::abs(index - centre), index);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(a) < key(b);
  });

  const int width = profiles.back().partition.x_end;
  for (auto i : order) {
    if (profiles[i].max_free_width >= min_width) {
      return Heading{
        profiles[i].partition.index, heading_angle(profiles[i].partition, width, hfov_deg)};
    }
  }
  return RerouteNeeded{};
}

}  // namespace vipguide::local_planner
