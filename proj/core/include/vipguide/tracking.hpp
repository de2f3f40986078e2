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

#ifndef VIPGUIDE__TRACKING_HPP_
#define VIPGUIDE__TRACKING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vipguide/perception.hpp"

namespace vipguide::tracking
{

using perception::BoundingBox;

/// Intersection over union of two half-open boxes.
double iou(const BoundingBox & a, const BoundingBox & b);

struct TrackPoint
{
  double timestamp = 0.0;
  BoundingBox bbox;
  std::optional<double> distance_m;
};

struct Track
{
  std::int64_t track_id = 0;
  std::string class_label;
  std::vector<TrackPoint> history;  // timestamps strictly increasing
  int misses = 0;

  /// Last observed box; held in place while the track is unmatched.
  const BoundingBox & last_bbox() const { return history.back().bbox; }
};

struct TrackerParams
{
  double iou_threshold = 0.3;
  int max_misses = 15;
  std::size_t max_history = 64;
};

struct TrackSet
{
  std::vector<Track> tracks;
  std::int64_t next_id = 0;
};

struct Association
{
  TrackSet tracks;
  /// Track id assigned to each input detection, in input order.
  std::vector<std::int64_t> detection_track_ids;
};

/// Greedy same-class IoU matching. Pairs are taken in descending IoU order;
/// equal IoUs go to the lower detection index, then the lower track index.
/// Throws DomainError if `timestamp` does not advance past a matched track's history.
Association associate(
  TrackSet tracks, std::span<const perception::Detection> detections, double timestamp,
  const TrackerParams & params = {});

/// Attaches a distance to the newest history entry of `track_id`, if that
/// entry was observed at `timestamp`.
void record_distance(TrackSet & tracks, std::int64_t track_id, double timestamp, double distance_m);

const Track * find_track(const TrackSet & tracks, std::int64_t track_id);

/// Negated least-squares slope of distance over time, using entries within
/// `window_s` of the newest one. Positive means closing in.
/// Throws InsufficientHistoryError with fewer than two usable entries.
double approach_rate(const Track & track, double window_s);

}  // namespace vipguide::tracking

#endif  // VIPGUIDE__TRACKING_HPP_
