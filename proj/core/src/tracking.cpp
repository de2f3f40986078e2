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

#include "vipguide/tracking.hpp"

#include <algorithm>
#include <tuple>

#include "vipguide/errors.hpp"

namespace vipguide::tracking
{

double iou(const BoundingBox & a, const BoundingBox & b)
{
  const std::int64_t ix = std::max(0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const std::int64_t iy = std::max(0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const std::int64_t inter = ix * iy;
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni <= 0) {
    return 0.0;
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Association associate(
  TrackSet tracks, std::span<const perception::Detection> detections, double timestamp,
  const TrackerParams & params)
{
  if (!(params.iou_threshold > 0.0 && params.iou_threshold < 1.0)) {
    throw DomainError("associate: iou_threshold must lie in (0, 1)");
  }

  struct Candidate
  {
    double overlap;
    std::size_t det;
    std::size_t track;
  };
  std::vector<Candidate> candidates;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    for (std::size_t t = 0; t < tracks.tracks.size(); ++t) {
      const auto & track = tracks.tracks[t];
      if (track.class_label != detections[d].class_label) {
        continue;
      }
      const double overlap = iou(track.last_bbox(), detections[d].bbox);
      if (overlap >= params.iou_threshold) {
        candidates.push_back({overlap, d, t});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate & l, const Candidate & r) {
    return std::tie(r.overlap, l.det, l.track) < std::tie(l.overlap, r.det, r.track);
  });

  constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);
  std::vector<std::size_t> det_to_track(detections.size(), kUnmatched);
  std::vector<bool> track_used(tracks.tracks.size(), false);
  for (const auto & c : candidates) {
    if (det_to_track[c.det] != kUnmatched || track_used[c.track]) {
      continue;
    }
    det_to_track[c.det] = c.track;
    track_used[c.track] = true;
  }

  Association out;
  out.detection_track_ids.resize(detections.size());
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (det_to_track[d] == kUnmatched) {
      continue;
    }
    auto & track = tracks.tracks[det_to_track[d]];
    if (!(timestamp > track.history.back().timestamp)) {
      throw DomainError("associate: timestamp does not advance past track history");
    }
    track.history.push_back({timestamp, detections[d].bbox, std::nullopt});
    if (track.history.size() > params.max_history) {
      track.history.erase(track.history.begin());
    }
    track.misses = 0;
    out.detection_track_ids[d] = track.track_id;
  }
  for (std::size_t t = 0; t < tracks.tracks.size(); ++t) {
    if (!track_used[t]) {
      ++tracks.tracks[t].misses;
    }
  }
  std::erase_if(tracks.tracks, [&](const Track & t) { return t.misses > params.max_misses; });

  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (det_to_track[d] != kUnmatched) {
      continue;
    }
    Track track;
    track.track_id = tracks.next_id++;
    track.class_label = detections[d].class_label;
    track.history.push_back({timestamp, detections[d].bbox, std::nullopt});
    out.detection_track_ids[d] = track.track_id;
    tracks.tracks.push_back(std::move(track));
  }
  out.tracks = std::move(tracks);
  return out;
}

void record_distance(TrackSet & tracks, std::int64_t track_id, double timestamp, double distance_m)
{
  for (auto & track : tracks.tracks) {
    if (track.track_id == track_id && track.history.back().timestamp == timestamp) {
      track.history.back().distance_m = distance_m;
      return;
    }
  }
}

const Track * find_track(const TrackSet & tracks, std::int64_t track_id)
{
  for (const auto & track : tracks.tracks) {
    if (track.track_id == track_id) {
      return &track;
    }
  }
  return nullptr;
}

double approach_rate(const Track & track, double window_s)
{
  if (track.history.empty()) {
    throw InsufficientHistoryError("approach_rate: empty history");
  }
  const double newest = track.history.back().timestamp;
  double st = 0.0, sd = 0.0;
  std::size_t n = 0;
  for (const auto & p : track.history) {
    if (p.distance_m && p.timestamp >= newest - window_s) {
      st += p.timestamp;
      sd += *p.distance_m;
      ++n;
    }
  }
  if (n < 2) {
    throw InsufficientHistoryError(
      "approach_rate: need 2 distance samples within the window, have " + std::to_string(n));
  }
  const double mean_t = st / static_cast<double>(n);
  const double mean_d = sd / static_cast<double>(n);
  double stt = 0.0, std_ = 0.0;
  for (const auto & p : track.history) {
    if (p.distance_m && p.timestamp >= newest - window_s) {
      stt += (p.timestamp - mean_t) * (p.timestamp - mean_t);
      std_ += (p.timestamp - mean_t) * (*p.distance_m - mean_d);
    }
  }
  return -std_ / stt;
}

}  // namespace vipguide::tracking
