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
#include <set>

#include "vipguide/errors.hpp"
#include "vipguide/tracking.hpp"

namespace vipguide::tracking
{
namespace
{

using perception::Detection;

Detection det(const std::string & cls, BoundingBox b) { return {cls, b, 0.9, std::nullopt}; }

TEST(Iou, Examples)
{
  EXPECT_EQ(iou({0, 0, 4, 4}, {0, 0, 4, 4}), 1.0);
  EXPECT_EQ(iou({0, 0, 2, 2}, {5, 5, 6, 6}), 0.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {1, 0, 3, 2}), 2.0 / 6.0);
}

TEST(Iou, SymmetricAndBounded)
{
  std::mt19937_64 rng(4);
  auto box = [&]() {
    const int x1 = std::uniform_int_distribution<int>(0, 50)(rng);
    const int y1 = std::uniform_int_distribution<int>(0, 50)(rng);
    return BoundingBox{x1, y1, x1 + std::uniform_int_distribution<int>(1, 30)(rng),
                       y1 + std::uniform_int_distribution<int>(1, 30)(rng)};
  };
  for (int i = 0; i < 1000; ++i) {
    const auto a = box(), b = box();
    ASSERT_EQ(iou(a, b), iou(b, a));
    ASSERT_GE(iou(a, b), 0.0);
    ASSERT_LE(iou(a, b), 1.0);
    ASSERT_EQ(iou(a, a), 1.0);
  }
}

TEST(Associate, NewTracksGetSequentialIds)
{
  const std::vector<Detection> d{det("car", {0, 0, 5, 5}), det("person", {10, 10, 15, 20}),
                                 det("car", {30, 0, 40, 5})};
  const auto a = associate({}, d, 0.0);
  ASSERT_EQ(a.tracks.tracks.size(), 3u);
  EXPECT_EQ(a.detection_track_ids, (std::vector<std::int64_t>{0, 1, 2}));
}

TEST(Associate, MatchExtendsHistory)
{
  auto a = associate({}, std::vector<Detection>{det("car", {0, 0, 10, 10})}, 0.0);
  a = associate(a.tracks, std::vector<Detection>{det("car", {0, 0, 10, 11})}, 0.1);
  ASSERT_EQ(a.tracks.tracks.size(), 1u);
  EXPECT_EQ(a.tracks.tracks[0].history.size(), 2u);
  EXPECT_EQ(a.detection_track_ids[0], 0);
  EXPECT_EQ(a.tracks.tracks[0].misses, 0);
}

TEST(Associate, ClassMustMatch)
{
  auto a = associate({}, std::vector<Detection>{det("car", {0, 0, 10, 10})}, 0.0);
  a = associate(a.tracks, std::vector<Detection>{det("person", {0, 0, 10, 10})}, 0.1);
  EXPECT_EQ(a.detection_track_ids[0], 1);
  EXPECT_EQ(a.tracks.tracks.size(), 2u);
}

TEST(Associate, RetiresAfterMaxMisses)
{
  TrackerParams p;
  p.max_misses = 3;
  auto a = associate({}, std::vector<Detection>{det("car", {0, 0, 10, 10})}, 0.0, p);
  for (int k = 1; k <= 3; ++k) {
    a = associate(a.tracks, {}, k * 0.1, p);
    ASSERT_EQ(a.tracks.tracks.size(), 1u) << "after " << k << " misses";
    EXPECT_EQ(a.tracks.tracks[0].misses, k);
    EXPECT_EQ(a.tracks.tracks[0].last_bbox(), (BoundingBox{0, 0, 10, 10}));
  }
  a = associate(a.tracks, {}, 0.4, p);
  EXPECT_TRUE(a.tracks.tracks.empty());
}

TEST(Associate, IdsNeverReused)
{
  TrackerParams p;
  p.max_misses = 0;
  std::set<std::int64_t> seen;
  TrackSet t;
  for (int k = 0; k < 20; ++k) {
    const int x = (k % 2) * 100;  // alternate far apart so nothing matches
    auto a = associate(t, std::vector<Detection>{det("car", {x, 0, x + 10, 10})}, k * 0.1, p);
    ASSERT_TRUE(seen.insert(a.detection_track_ids[0]).second);
    t = a.tracks;
  }
}

TEST(Associate, TiesGoToLowerDetectionIndex)
{
  auto a = associate({}, std::vector<Detection>{det("car", {10, 0, 20, 10})}, 0.0);
  // both detections overlap the track identically
  a = associate(a.tracks, std::vector<Detection>{det("car", {5, 0, 15, 10}), det("car", {15, 0, 25, 10})}, 0.1);
  EXPECT_EQ(a.detection_track_ids, (std::vector<std::int64_t>{0, 1}));
}

TEST(Associate, Deterministic)
{
  std::mt19937_64 rng(12);
  std::vector<std::vector<Detection>> frames;
  for (int f = 0; f < 50; ++f) {
    std::vector<Detection> d;
    for (int i = 0; i < 6; ++i) {
      const int x = std::uniform_int_distribution<int>(0, 60)(rng);
      d.push_back(det(i % 2 ? "car" : "person", {x, 0, x + 20, 20}));
    }
    frames.push_back(d);
  }
  auto run = [&]() {
    TrackSet t;
    std::vector<std::int64_t> ids;
    for (std::size_t f = 0; f < frames.size(); ++f) {
      auto a = associate(t, frames[f], f * 0.1);
      ids.insert(ids.end(), a.detection_track_ids.begin(), a.detection_track_ids.end());
      t = a.tracks;
    }
    return ids;
  };
  EXPECT_EQ(run(), run());
}

TEST(Associate, TimestampMustAdvance)
{
  auto a = associate({}, std::vector<Detection>{det("car", {0, 0, 10, 10})}, 1.0);
  EXPECT_THROW(associate(a.tracks, std::vector<Detection>{det("car", {0, 0, 10, 10})}, 1.0), DomainError);
}

Track with_distances(const std::vector<std::pair<double, double>> & pts)
{
  Track t;
  for (const auto & [ts, d] : pts) {
    t.history.push_back({ts, {0, 0, 1, 1}, d});
  }
  return t;
}

TEST(ApproachRate, Examples)
{
  EXPECT_DOUBLE_EQ(approach_rate(with_distances({{0, 5}, {1, 4}}), 10.0), 1.0);
  EXPECT_DOUBLE_EQ(approach_rate(with_distances({{0, 3}, {1, 3}, {2, 3}}), 10.0), 0.0);
  EXPECT_DOUBLE_EQ(approach_rate(with_distances({{0, 6}, {1, 5}, {2, 4}}), 10.0), 1.0);
}

TEST(ApproachRate, WindowAndInsufficientHistory)
{
  EXPECT_THROW(approach_rate(with_distances({{0, 5}}), 10.0), InsufficientHistoryError);
  // only the last entry is inside a 0.5 s window
  EXPECT_THROW(approach_rate(with_distances({{0, 5}, {1, 4}}), 0.5), InsufficientHistoryError);
  EXPECT_DOUBLE_EQ(approach_rate(with_distances({{0, 100}, {10, 5}, {11, 4}}), 1.0), 1.0);
}

TEST(ApproachRate, DecreasingDistancesArePositive)
{
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts;
    double d = 20.0;
    for (int i = 0; i < 8; ++i) {
      pts.emplace_back(i * 0.1, d);
      d -= std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    }
    ASSERT_GT(approach_rate(with_distances(pts), 5.0), 0.0);
  }
}

TEST(RecordDistance, OnlyAtCurrentTimestamp)
{
  auto a = associate({}, std::vector<Detection>{det("car", {0, 0, 10, 10})}, 0.0);
  record_distance(a.tracks, 0, 0.0, 4.0);
  record_distance(a.tracks, 0, 0.5, 9.0);  // stale timestamp, ignored
  ASSERT_NE(find_track(a.tracks, 0), nullptr);
  EXPECT_EQ(find_track(a.tracks, 0)->history.back().distance_m, 4.0);
  EXPECT_EQ(find_track(a.tracks, 7), nullptr);
}

}  // namespace
}  // namespace vipguide::tracking
