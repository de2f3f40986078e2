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

#include "vipguide/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "json.hpp"
#include "vipguide/calibration.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/geometry.hpp"

namespace vipguide::pipeline
{
namespace
{

using Clock = std::chrono::steady_clock;
using perception::BitGrid;
using perception::BoundingBox;
namespace lp = local_planner;

double elapsed_ms(Clock::time_point since)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

BitGrid box_grid(const BoundingBox & box, int width, int height)
{
  BitGrid g(width, height);
  for (int y = box.y1; y < box.y2; ++y) {
    for (int x = box.x1; x < box.x2; ++x) {
      g.set(x, y, true);
    }
  }
  return g;
}

std::optional<BoundingBox> clip_box(const BoundingBox & box, int width, int height)
{
  const BoundingBox c{
    std::max(box.x1, 0), std::max(box.y1, 0), std::min(box.x2, width), std::min(box.y2, height)};
  if (c.x1 >= c.x2 || c.y1 >= c.y2) {
    return std::nullopt;
  }
  return c;
}

}  // namespace

double percentile(std::vector<double> values, double p)
{
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values[rank - 1];
}

void LatencyStats::add(const StageLatency & sample)
{
  decode_.push_back(sample.decode_ms);
  track_.push_back(sample.track_ms);
  plan_.push_back(sample.plan_ms);
  planner_.push_back(sample.planner_ms());
}

double LatencyStats::decode_percentile(double p) const { return percentile(decode_, p); }
double LatencyStats::track_percentile(double p) const { return percentile(track_, p); }
double LatencyStats::plan_percentile(double p) const { return percentile(plan_, p); }
double LatencyStats::planner_percentile(double p) const { return percentile(planner_, p); }

Pipeline::Pipeline(Config config) : config_(std::move(config))
{
  if (!config_.calibration) {
    throw ConfigError("a calibration model is required");
  }
  validate(config_);
  model_ = *config_.calibration;
  if (config_.route.graph) {
    graph_ = config_.route.graph;
    current_node_ = config_.route.src;
    try {
      route_ = global_planner::shortest_path(*graph_, config_.route.src, config_.route.dst);
    } catch (const UnreachableError & e) {
      throw ConfigError(std::string("route: ") + e.what());
    }
  }
}

double Pipeline::live_speed(double fallback) const
{
  std::vector<double> rates;
  for (const auto & track : tracks_.tracks) {
    if (track.track_id == vip_track_id_ || track.misses > 0) {
      continue;
    }
    try {
      rates.push_back(tracking::approach_rate(track, config_.pipeline.rate_window_s));
    } catch (const InsufficientHistoryError &) {
    }
  }
  if (rates.empty()) {
    return fallback;
  }
  const auto mid = rates.begin() + static_cast<std::ptrdiff_t>((rates.size() - 1) / 2);
  std::nth_element(rates.begin(), mid, rates.end());
  // obstacles are static, so the median closing rate is the VIP's own speed
  return std::isfinite(*mid) && *mid > 0.0 ? *mid : fallback;
}

void Pipeline::handle_reroute(RerouteOutcome & out, std::vector<std::string> & notes)
{
  ++reroute_streak_;
  if (reroute_streak_ < config_.pipeline.reroute_hysteresis) {
    notes.push_back(
      "reroute pending " + std::to_string(reroute_streak_) + "/" +
      std::to_string(config_.pipeline.reroute_hysteresis));
    return;
  }
  reroute_streak_ = 0;
  if (!graph_) {
    notes.push_back("no navigation graph configured");
    return;
  }
  const auto & dst = config_.route.dst;
  if (route_ && route_->nodes.size() >= 2) {
    const auto & nodes = route_->nodes;
    const auto it = std::find(nodes.begin(), nodes.end(), current_node_);
    if (it != nodes.end() && std::next(it) != nodes.end()) {
      out.blocked_from = *it;
      out.blocked_to = *std::next(it);
      graph_->block_edge(*out.blocked_from, *out.blocked_to);
    }
  }
  try {
    route_ = global_planner::replan(*graph_, current_node_, dst);
    out.replanned = true;
    out.new_route = route_->nodes;
  } catch (const UnreachableError &) {
    // the old route crosses a blocked edge and must not survive
    route_.reset();
    notes.push_back("destination unreachable after blocking");
  }
}

GuidanceDecision Pipeline::process_frame(const perception::PerceptionFrame & frame, double decode_ms)
{
  if (last_frame_id_ && frame.frame_id <= *last_frame_id_) {
    throw ConsistencyError(
      "frame_id " + std::to_string(frame.frame_id) + " does not follow " +
      std::to_string(*last_frame_id_));
  }
  perception::validate(frame);

  GuidanceDecision d;
  d.frame_id = frame.frame_id;
  d.timestamp = frame.timestamp;
  d.latency.decode_ms = decode_ms;

  const auto t_track = Clock::now();
  auto assoc = tracking::associate(tracks_, frame.detections, frame.timestamp, config_.tracking);
  tracks_ = std::move(assoc.tracks);
  d.latency.track_ms = elapsed_ms(t_track);
  last_frame_id_ = frame.frame_id;

  const auto t_plan = Clock::now();
  const auto & geo = config_.geometry;
  const auto & pp = config_.planner;

  std::optional<std::size_t> vip_index;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    if (frame.detections[i].is_vip()) {
      vip_index = i;
      break;
    }
  }

  BitGrid vip_grid;
  double vip_distance = 0.0;
  if (vip_index) {
    const auto & vip = frame.detections[*vip_index];
    vip_track_id_ = assoc.detection_track_ids[*vip_index];
    vip_missing_ = 0;
    d.vip_bbox = vip.bbox;
    vip_grid = frame.vip_mask ? perception::rle_decode(*frame.vip_mask)
                              : box_grid(vip.bbox, frame.width, frame.height);
    try {
      vip_distance = calibration::detection_distance(frame, vip, model_, &vip_grid);
      held_vip_distance_ = vip_distance;
    } catch (const DomainError &) {
      vip_distance = held_vip_distance_.value_or(0.0);
      d.notes.push_back("vip distance unavailable");
    }
    held_vip_ = vip.bbox;
  } else {
    ++vip_missing_;
    if (held_vip_) {
      // a resized stream can leave the held box partly or wholly off-frame
      held_vip_ = clip_box(*held_vip_, frame.width, frame.height);
    }
    if (!held_vip_ || vip_missing_ > config_.pipeline.vip_lost_frames) {
      d.vip_missing_frames = vip_missing_;
      d.outcome = VipLost{};
      d.edge_status = lp::EdgeStatus::unknown;
      reroute_streak_ = 0;
      d.latency.plan_ms = elapsed_ms(t_plan);
      stats_.add(d.latency);
      return d;
    }
    d.vip_bbox = held_vip_;
    vip_grid = box_grid(*held_vip_, frame.width, frame.height);
    vip_distance = held_vip_distance_.value_or(0.0);
    d.notes.push_back("vip not detected; holding last position");
  }
  d.vip_missing_frames = vip_missing_;
  const BoundingBox vip_box = *d.vip_bbox;

  // distances ahead of the VIP, fed back into the tracks for live speed
  std::vector<BoundingBox> boxes;
  std::vector<std::optional<double>> ahead;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    if (vip_index && i == *vip_index) {
      continue;
    }
    const auto & det = frame.detections[i];
    ObstacleAssessment a;
    a.track_id = assoc.detection_track_ids[i];
    a.class_label = det.class_label;
    a.bbox = det.bbox;
    try {
      const double raw = calibration::detection_distance(frame, det, model_) - vip_distance;
      tracking::record_distance(tracks_, a.track_id, frame.timestamp, raw);
      a.distance_m = std::max(0.0, raw);
    } catch (const DomainError &) {
      d.notes.push_back("distance unavailable for track " + std::to_string(a.track_id));
    }
    boxes.push_back(det.bbox);
    ahead.push_back(a.distance_m);
    d.assessments.push_back(std::move(a));
  }

  const double fallback = geo.walk_speed_mps;
  d.speed_mps = config_.pipeline.live_speed ? live_speed(fallback) : fallback;
  d.safety_distance_m = geometry::safety_distance(d.speed_mps, geo.t_detect_s, geo.t_react_s);
  for (auto & a : d.assessments) {
    // an unmeasurable obstacle is kept as a warning rather than dropped
    a.severity = a.distance_m
                   ? lp::classify_obstacle(*a.distance_m, d.safety_distance_m, pp.danger_mult, pp.warning_mult)
                   : lp::Severity::warning;
  }

  if (frame.road_mask) {
    const auto road = perception::rle_decode(*frame.road_mask);
    d.edge_status = lp::road_edge_check(vip_box, &road, pp.edge_box_px, pp.edge_threshold);
  } else {
    d.edge_status = lp::EdgeStatus::unknown;
  }

  const auto partitions = lp::partition_bounds(frame.width, pp.n_partitions);
  const auto space =
    lp::free_space(boxes, ahead, pp.danger_mult * d.safety_distance_m, frame.width, partitions);
  d.profiles.reserve(partitions.size());
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    const auto depth = lp::mean_partition_depth(frame.depth, partitions[i], &vip_grid);
    lp::PartitionProfile prof;
    prof.partition = partitions[i];
    prof.h_score = depth.mean;
    prof.depth_empty = depth.empty;
    prof.free_segments = space.partition_segments[i];
    prof.max_free_width = space.max_free_width[i];
    d.profiles.push_back(std::move(prof));
  }

  const int vip_part = lp::partition_of(partitions, (vip_box.x1 + vip_box.x2) / 2);
  const auto outcome =
    lp::decide(d.profiles, vip_part, lp::width_threshold(vip_box, pp.width_margin), geo.hfov_deg);
  if (const auto * h = std::get_if<lp::Heading>(&outcome)) {
    reroute_streak_ = 0;
    d.outcome = *h;
  } else {
    RerouteOutcome r;
    handle_reroute(r, d.notes);
    d.outcome = std::move(r);
  }

  d.latency.plan_ms = elapsed_ms(t_plan);
  stats_.add(d.latency);
  return d;
}

std::string decision_to_json(const GuidanceDecision & d, bool include_latency)
{
  using Json = nlohmann::ordered_json;
  auto bbox = [](const BoundingBox & b) { return Json::array({b.x1, b.y1, b.x2, b.y2}); };

  Json j;
  j["frame_id"] = d.frame_id;
  j["timestamp"] = d.timestamp;

  Json outcome;
  if (const auto * h = std::get_if<lp::Heading>(&d.outcome)) {
    outcome["type"] = "heading";
    outcome["partition"] = h->partition;
    outcome["angle_deg"] = h->angle_deg;
  } else if (const auto * r = std::get_if<RerouteOutcome>(&d.outcome)) {
    outcome["type"] = "reroute";
    outcome["replanned"] = r->replanned;
    outcome["new_route"] = r->new_route;
    if (r->blocked_from) {
      outcome["blocked_edge"] = Json::array({*r->blocked_from, *r->blocked_to});
    }
  } else {
    outcome["type"] = "vip_lost";
  }
  j["outcome"] = std::move(outcome);

  Json assessments = Json::array();
  for (const auto & a : d.assessments) {
    Json e;
    e["track_id"] = a.track_id;
    e["class"] = a.class_label;
    e["bbox"] = bbox(a.bbox);
    e["distance_m"] = a.distance_m ? Json(*a.distance_m) : Json(nullptr);
    e["severity"] = std::string(lp::to_string(a.severity));
    assessments.push_back(std::move(e));
  }
  j["assessments"] = std::move(assessments);
  j["edge_status"] = std::string(lp::to_string(d.edge_status));
  j["safety_distance_m"] = d.safety_distance_m;
  j["speed_mps"] = d.speed_mps;

  Json vip;
  vip["bbox"] = d.vip_bbox ? bbox(*d.vip_bbox) : Json(nullptr);
  vip["missing_frames"] = d.vip_missing_frames;
  j["vip"] = std::move(vip);

  Json parts = Json::array();
  for (const auto & p : d.profiles) {
    Json e;
    e["index"] = p.partition.index;
    e["h_score"] = p.h_score;
    e["max_free_width"] = p.max_free_width;
    parts.push_back(std::move(e));
  }
  j["partitions"] = std::move(parts);
  if (!d.notes.empty()) {
    j["notes"] = d.notes;
  }
  if (include_latency) {
    Json lat;
    lat["decode"] = d.latency.decode_ms;
    lat["track"] = d.latency.track_ms;
    lat["plan"] = d.latency.plan_ms;
    j["latency_ms"] = std::move(lat);
  }
  return j.dump();
}

}  // namespace vipguide::pipeline
