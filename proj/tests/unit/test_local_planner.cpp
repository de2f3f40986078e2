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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/local_planner.hpp"

namespace vipguide::local_planner
{
namespace
{

std::vector<std::pair<int, int>> spans(const std::vector<Partition> & parts)
{
  std::vector<std::pair<int, int>> out;
  for (const auto & p : parts) {
    out.emplace_back(p.x_start, p.x_end);
  }
  return out;
}

std::vector<oracle::Seg> to_oracle(const std::vector<Segment> & segs)
{
  std::vector<oracle::Seg> out;
  for (const auto & s : segs) {
    out.push_back({s.x_start, s.x_end});
  }
  return out;
}

TEST(Partitions, Examples)
{
  EXPECT_EQ(spans(partition_bounds(600, 3)), (std::vector<std::pair<int, int>>{{0, 200}, {200, 400}, {400, 600}}));
  EXPECT_EQ(spans(partition_bounds(601, 3)), (std::vector<std::pair<int, int>>{{0, 201}, {201, 401}, {401, 601}}));
  EXPECT_EQ(spans(partition_bounds(602, 3)), (std::vector<std::pair<int, int>>{{0, 201}, {201, 402}, {402, 602}}));
  EXPECT_EQ(spans(partition_bounds(77, 1)), (std::vector<std::pair<int, int>>{{0, 77}}));
  EXPECT_THROW(partition_bounds(600, 2), DomainError);
  EXPECT_THROW(partition_bounds(600, 0), DomainError);
  EXPECT_THROW(partition_bounds(2, 3), DomainError);
}

TEST(Partitions, TileTheFrame)
{
  for (int n = 1; n <= 11; n += 2) {
    for (int w = n; w < n + 200; ++w) {
      const auto parts = partition_bounds(w, n);
      ASSERT_EQ(static_cast<int>(parts.size()), n);
      int x = 0, lo = w, hi = 0;
      for (int i = 0; i < n; ++i) {
        ASSERT_EQ(parts[static_cast<std::size_t>(i)].index, i);
        ASSERT_EQ(parts[static_cast<std::size_t>(i)].x_start, x);
        x = parts[static_cast<std::size_t>(i)].x_end;
        lo = std::min(lo, parts[static_cast<std::size_t>(i)].width());
        hi = std::max(hi, parts[static_cast<std::size_t>(i)].width());
      }
      ASSERT_EQ(x, w);
      ASSERT_LE(hi - lo, 1);
      for (int c = 0; c < w; c += 7) {
        const auto & p = parts[static_cast<std::size_t>(partition_of(parts, c))];
        ASSERT_TRUE(p.x_start <= c && c < p.x_end);
      }
    }
  }
}

TEST(MeanDepth, Examples)
{
  DepthMap uniform(6, 4, 100);
  EXPECT_EQ(mean_partition_depth(uniform, {0, 0, 6}).mean, 100.0);

  DepthMap half(4, 4, 40);
  BitGrid mask(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 2; ++x) {
      half.at(x, y) = 60000;
      mask.set(x, y, true);
    }
  }
  EXPECT_EQ(mean_partition_depth(half, {0, 0, 4}, &mask).mean, 40.0);

  DepthMap four(2, 2);
  four.values = {10, 20, 30, 40};
  EXPECT_EQ(mean_partition_depth(four, {0, 0, 2}).mean, 25.0);
}

TEST(MeanDepth, FullyExcludedIsEmpty)
{
  DepthMap d(3, 3, 500);
  BitGrid all(3, 3);
  std::fill(all.bits.begin(), all.bits.end(), 1);
  const auto r = mean_partition_depth(d, {0, 0, 3}, &all);
  EXPECT_TRUE(r.empty);
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.pixel_count, 0u);
}

TEST(FreeSpace, NoDetections)
{
  const auto parts = partition_bounds(600, 3);
  const auto fs = free_space({}, {}, 1.0, 600, parts);
  EXPECT_EQ(fs.max_free_width, (std::vector<int>{200, 200, 200}));
  ASSERT_EQ(fs.frame_segments.size(), 1u);
}

TEST(FreeSpace, TwoBoxes)
{
  const auto parts = partition_bounds(600, 3);
  const std::vector<BoundingBox> boxes{{100, 0, 200, 10}, {350, 0, 400, 10}};
  const std::vector<std::optional<double>> d{0.5, 0.5};
  const auto fs = free_space(boxes, d, 1.0, 600, parts);
  EXPECT_EQ(fs.frame_segments, (std::vector<Segment>{{0, 100}, {200, 350}, {400, 600}}));
}

TEST(FreeSpace, OverlappingBoxesMerge)
{
  const auto parts = partition_bounds(600, 3);
  const std::vector<BoundingBox> boxes{{100, 0, 300, 10}, {250, 0, 420, 10}};
  const std::vector<std::optional<double>> d{0.5, std::nullopt};
  const auto fs = free_space(boxes, d, 1.0, 600, parts);
  EXPECT_EQ(fs.frame_segments, (std::vector<Segment>{{0, 100}, {420, 600}}));
}

TEST(FreeSpace, DistantBoxesIgnored)
{
  const auto parts = partition_bounds(600, 3);
  const std::vector<BoundingBox> boxes{{0, 0, 600, 10}};
  const std::vector<std::optional<double>> d{5.0};
  EXPECT_EQ(free_space(boxes, d, 1.0, 600, parts).max_free_width, (std::vector<int>{200, 200, 200}));
}

TEST(FreeSpace, MatchesColumnScanOracle)
{
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int width = std::uniform_int_distribution<int>(3, 400)(rng);
    const int n = 1 + 2 * std::uniform_int_distribution<int>(0, std::min(3, (width - 1) / 2))(rng);
    const auto parts = partition_bounds(width, n);
    std::vector<BoundingBox> boxes;
    std::vector<std::optional<double>> d;
    const int k = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int i = 0; i < k; ++i) {
      const int x1 = std::uniform_int_distribution<int>(0, width - 1)(rng);
      const int x2 = std::uniform_int_distribution<int>(x1 + 1, width)(rng);
      boxes.push_back({x1, 0, x2, 1});
      const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      d.push_back(kind == 0 ? std::nullopt : std::optional<double>(kind == 1 ? 0.5 : 3.0));
    }
    const auto fs = free_space(boxes, d, 1.0, width, parts);
    const auto ref = oracle::column_scan_free_space(boxes, d, 1.0, width, spans(parts));
    ASSERT_EQ(to_oracle(fs.frame_segments), ref.frame);
    for (std::size_t p = 0; p < parts.size(); ++p) {
      ASSERT_EQ(to_oracle(fs.partition_segments[p]), ref.per_partition[p]);
      ASSERT_EQ(fs.max_free_width[p], ref.max_width[p]);
    }
  }
}

TEST(Severity, Examples)
{
  EXPECT_EQ(classify_obstacle(0.5, 1.0), Severity::danger);
  EXPECT_EQ(classify_obstacle(1.0, 1.0), Severity::danger);
  EXPECT_EQ(classify_obstacle(1.5, 1.0), Severity::warning);
  EXPECT_EQ(classify_obstacle(2.0, 1.0), Severity::warning);
  EXPECT_EQ(classify_obstacle(3.0, 1.0), Severity::clear);
}

TEST(Severity, MonotoneInDistance)
{
  int prev = 0;
  for (int i = 0; i <= 1000; ++i) {
    const int s = static_cast<int>(classify_obstacle(i * 0.01, 1.161));
    ASSERT_GE(s, prev);
    prev = s;
  }
}

BitGrid filled(int w, int h, bool v)
{
  BitGrid g(w, h);
  std::fill(g.bits.begin(), g.bits.end(), v ? 1 : 0);
  return g;
}

TEST(RoadEdge, Examples)
{
  const BoundingBox vip{200, 100, 250, 300};
  auto road = filled(640, 480, true);
  EXPECT_EQ(road_edge_check(vip, &road), EdgeStatus::safe);

  for (int y = 210; y < 300; ++y) {
    for (int x = 110; x < 200; ++x) {
      road.set(x, y, false);
    }
  }
  EXPECT_EQ(road_edge_check(vip, &road), EdgeStatus::warn_left);

  // right probe 60% road (54 of 90 columns)
  road = filled(640, 480, true);
  for (int y = 210; y < 300; ++y) {
    for (int x = 250 + 54; x < 340; ++x) {
      road.set(x, y, false);
    }
  }
  EXPECT_EQ(road_edge_check(vip, &road), EdgeStatus::safe);
  EXPECT_EQ(road_edge_check(vip, nullptr), EdgeStatus::unknown);
}

TEST(RoadEdge, ClippedProbeWarns)
{
  const auto road = filled(100, 100, true);
  EXPECT_EQ(road_edge_check({0, 10, 20, 50}, &road), EdgeStatus::warn_left);
  EXPECT_EQ(road_edge_check({80, 10, 100, 50}, &road), EdgeStatus::warn_right);
  EXPECT_EQ(road_edge_check({0, 10, 100, 50}, &road), EdgeStatus::warn_both);
}

TEST(RoadEdge, MatchesMeanDefinitionOnRandomMasks)
{
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = 60, h = 40;
    BitGrid road(w, h);
    const int p = std::uniform_int_distribution<int>(0, 10)(rng);
    for (auto & b : road.bits) {
      b = std::uniform_int_distribution<int>(0, 9)(rng) < p;
    }
    const int x1 = std::uniform_int_distribution<int>(0, w - 2)(rng);
    const int x2 = std::uniform_int_distribution<int>(x1 + 1, w)(rng);
    const int y1 = std::uniform_int_distribution<int>(0, h - 2)(rng);
    const int y2 = std::uniform_int_distribution<int>(y1 + 1, h)(rng);
    const int box = std::uniform_int_distribution<int>(1, 20)(rng);
    const int thr = std::uniform_int_distribution<int>(0, 255)(rng);
    const BoundingBox vip{x1, y1, x2, y2};
    const bool left = oracle::probe_safe(road, x1 - box, y2 - box, x1, y2, thr);
    const bool right = oracle::probe_safe(road, x2, y2 - box, x2 + box, y2, thr);
    const EdgeStatus expected = left && right ? EdgeStatus::safe
                                : !left && !right ? EdgeStatus::warn_both
                                : !left ? EdgeStatus::warn_left
                                        : EdgeStatus::warn_right;
    ASSERT_EQ(road_edge_check(vip, &road, box, thr), expected) << "trial " << trial;
  }
}

PartitionProfile profile(int index, double h, int free_w)
{
  PartitionProfile p;
  p.partition = {index, index * 200, index * 200 + 200};
  p.h_score = h;
  p.max_free_width = free_w;
  return p;
}

TEST(Decide, EqualScoresPickCentre)
{
  const std::vector<PartitionProfile> ps{profile(0, 10, 200), profile(1, 10, 200), profile(2, 10, 200)};
  const auto out = decide(ps, 0, 60, 90.0);
  ASSERT_TRUE(std::holds_alternative<Heading>(out));
  // VIP partition wins the tie first
  EXPECT_EQ(std::get<Heading>(out).partition, 0);
  const auto centre = decide(ps, 5, 60, 90.0);
  EXPECT_EQ(std::get<Heading>(centre).partition, 1);
  EXPECT_DOUBLE_EQ(std::get<Heading>(centre).angle_deg, 0.0);
}

TEST(Decide, SaturatedLeftAndCentreGoRight)
{
  const std::vector<PartitionProfile> ps{profile(0, 900, 10), profile(1, 800, 0), profile(2, 950, 200)};
  const auto out = decide(ps, 1, 60, 90.0);
  ASSERT_TRUE(std::holds_alternative<Heading>(out));
  EXPECT_EQ(std::get<Heading>(out).partition, 2);
}

TEST(Decide, ExhaustionRequestsReroute)
{
  const std::vector<PartitionProfile> ps{profile(0, 1, 59), profile(1, 2, 0), profile(2, 3, 12)};
  EXPECT_TRUE(std::holds_alternative<RerouteNeeded>(decide(ps, 1, 60, 90.0)));
}

TEST(Decide, HeadingAlwaysPassesThresholdAndRerouteMeansAllFail)
{
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + 2 * std::uniform_int_distribution<int>(0, 3)(rng);
    std::vector<PartitionProfile> ps;
    for (int i = 0; i < n; ++i) {
      ps.push_back(profile(i, std::uniform_int_distribution<int>(0, 5)(rng),
                           std::uniform_int_distribution<int>(0, 200)(rng)));
    }
    const int thr = std::uniform_int_distribution<int>(1, 200)(rng);
    const auto out = decide(ps, std::uniform_int_distribution<int>(0, n - 1)(rng), thr, 80.0);
    if (const auto * h = std::get_if<Heading>(&out)) {
      ASSERT_GE(ps[static_cast<std::size_t>(h->partition)].max_free_width, thr);
      // nothing admissible scores strictly lower
      for (const auto & p : ps) {
        if (p.max_free_width >= thr) {
          ASSERT_GE(p.h_score, ps[static_cast<std::size_t>(h->partition)].h_score);
        }
      }
    } else {
      for (const auto & p : ps) {
        ASSERT_LT(p.max_free_width, thr);
      }
    }
  }
}

TEST(Heading, Angles)
{
  const auto parts = partition_bounds(600, 3);
  EXPECT_DOUBLE_EQ(heading_angle(parts[1], 600, 90.0), 0.0);
  EXPECT_DOUBLE_EQ(heading_angle(parts[2], 600, 90.0), 30.0);
  EXPECT_DOUBLE_EQ(heading_angle(parts[0], 600, 90.0), -30.0);
  for (int w : {300, 640, 1280}) {
    for (int n : {3, 5, 7}) {
      const auto p = partition_bounds(w, n);
      for (int i = 0; i < n; ++i) {
        const auto & mirror = p[static_cast<std::size_t>(n - 1 - i)];
        const auto & part = p[static_cast<std::size_t>(i)];
        if (part.x_start == w - mirror.x_end && part.width() == mirror.width()) {
          ASSERT_DOUBLE_EQ(heading_angle(part, w, 80.0), -heading_angle(mirror, w, 80.0));
        }
      }
    }
  }
}

TEST(WidthThreshold, CeilOfMargin)
{
  EXPECT_EQ(width_threshold({0, 0, 50, 10}, 1.2), 60);
  EXPECT_EQ(width_threshold({0, 0, 42, 10}, 1.2), 51);
  EXPECT_EQ(width_threshold({0, 0, 10, 10}, 1.0), 10);
}

}  // namespace
}  // namespace vipguide::local_planner
