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

#ifndef VIPGUIDE__LOCAL_PLANNER_HPP_
#define VIPGUIDE__LOCAL_PLANNER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vipguide/perception.hpp"

namespace vipguide::local_planner
{

using perception::BitGrid;
using perception::BoundingBox;
using perception::DepthMap;

/// Vertical strip [x_start, x_end) of the frame; index 0 is leftmost.
struct Partition
{
  int index = 0;
  int x_start = 0;
  int x_end = 0;

  int width() const { return x_end - x_start; }
  bool operator==(const Partition &) const = default;
};

/// n contiguous strips whose widths differ by at most one pixel, the
/// remainder going to the leftmost strips. Throws DomainError for even or
/// non-positive n, or width < n.
std::vector<Partition> partition_bounds(int width, int n);

/// Index of the partition containing column x (clamped to the frame).
int partition_of(std::span<const Partition> partitions, int x);

struct PartitionDepth
{
  double mean = 0.0;
  std::uint64_t pixel_count = 0;
  bool empty = false;  ///< every pixel was excluded; mean is 0
};

/// Mean REV over the partition's columns, skipping pixels set in `exclude`.
PartitionDepth mean_partition_depth(
  const DepthMap & depth, const Partition & partition, const BitGrid * exclude = nullptr);

/// Half-open column range.
struct Segment
{
  int x_start = 0;
  int x_end = 0;

  int width() const { return x_end - x_start; }
  bool operator==(const Segment &) const = default;
};

struct FreeSpace
{
  std::vector<Segment> frame_segments;
  std::vector<std::vector<Segment>> partition_segments;
  std::vector<int> max_free_width;
};

/// Gaps between obstacle footprints along the x axis. Only boxes whose
/// distance is within `d_filter` count as obstacles; a missing distance is
/// treated as within range.
FreeSpace free_space(
  std::span<const BoundingBox> boxes, std::span<const std::optional<double>> distances,
  double d_filter, int width, std::span<const Partition> partitions);

enum class Severity
{
  danger,
  warning,
  clear,
};

std::string_view to_string(Severity s);

Severity classify_obstacle(
  double distance_m, double safety_m, double danger_mult = 1.0, double warning_mult = 2.0);

enum class EdgeStatus
{
  safe,
  warn_left,
  warn_right,
  warn_both,
  unknown,
};

std::string_view to_string(EdgeStatus s);

/// Probes box_px x box_px regions left and right of the VIP box, bottom
/// aligned to its lower edge. A side is safe when the mean of road ? 255 : 0
/// over the (frame-clipped) probe exceeds `threshold`; a probe clipped away
/// entirely counts as a warning. `road == nullptr` yields unknown.
EdgeStatus road_edge_check(
  const BoundingBox & vip, const BitGrid * road, int box_px = 90, int threshold = 128);

struct PartitionProfile
{
  Partition partition;
  double h_score = 0.0;
  bool depth_empty = false;
  std::vector<Segment> free_segments;
  int max_free_width = 0;
};

struct Heading
{
  int partition = 0;
  double angle_deg = 0.0;
  bool operator==(const Heading &) const = default;
};

struct RerouteNeeded
{
  bool operator==(const RerouteNeeded &) const = default;
};

using Outcome = std::variant<Heading, RerouteNeeded>;

/// Signed heading towards the partition centre; positive is to the right.
double heading_angle(const Partition & partition, int width, double hfov_deg);

/// ceil(margin * vip width).
int width_threshold(const BoundingBox & vip, double margin);

/// Walks partitions in ascending h_score (ties: the VIP's partition, then
/// closest to the centre, then lowest index) and picks the first whose
/// widest free segment is at least `min_width`. RerouteNeeded when none does.
Outcome decide(
  std::span<const PartitionProfile> profiles, int vip_partition, int min_width, double hfov_deg);

}  // namespace vipguide::local_planner

#endif  // VIPGUIDE__LOCAL_PLANNER_HPP_
