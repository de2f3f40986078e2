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

#ifndef VIPGUIDE__PIPELINE_HPP_
#define VIPGUIDE__PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vipguide/config.hpp"
#include "vipguide/global_planner.hpp"
#include "vipguide/local_planner.hpp"
#include "vipguide/perception.hpp"
#include "vipguide/tracking.hpp"

namespace vipguide::pipeline
{

struct ObstacleAssessment
{
  std::int64_t track_id = 0;
  std::string class_label;
  perception::BoundingBox bbox;
  std::optional<double> distance_m;  ///< ahead of the VIP; empty when unmeasurable
  local_planner::Severity severity = local_planner::Severity::clear;
};

struct RerouteOutcome
{
  bool replanned = false;  ///< hysteresis satisfied and the graph was replanned
  std::vector<std::string> new_route;
  std::optional<std::string> blocked_from;
  std::optional<std::string> blocked_to;
};

struct VipLost
{
};

using DecisionOutcome = std::variant<local_planner::Heading, RerouteOutcome, VipLost>;

struct StageLatency
{
  double decode_ms = 0.0;
  double track_ms = 0.0;
  double plan_ms = 0.0;

  double planner_ms() const { return track_ms + plan_ms; }
};

struct GuidanceDecision
{
  std::int64_t frame_id = 0;
  double timestamp = 0.0;
  DecisionOutcome outcome;
  std::vector<ObstacleAssessment> assessments;
  local_planner::EdgeStatus edge_status = local_planner::EdgeStatus::unknown;
  double safety_distance_m = 0.0;
  double speed_mps = 0.0;
  std::optional<perception::BoundingBox> vip_bbox;
  int vip_missing_frames = 0;  ///< consecutive frames without a VIP detection
  std::vector<local_planner::PartitionProfile> profiles;
  std::vector<std::string> notes;  ///< degraded-input remarks
  StageLatency latency;
};

/// Running per-stage latency samples.
class LatencyStats
{
public:
  void add(const StageLatency & sample);
  std::size_t count() const { return decode_.size(); }

  /// Nearest-rank percentile, p in (0, 100]. Zero when empty.
  double decode_percentile(double p) const;
  double track_percentile(double p) const;
  double plan_percentile(double p) const;
  double planner_percentile(double p) const;

private:
  std::vector<double> decode_;
  std::vector<double> track_;
  std::vector<double> plan_;
  std::vector<double> planner_;
};

double percentile(std::vector<double> values, double p);

class Pipeline
{
public:
  /// Throws ConfigError when no calibration model is configured.
  explicit Pipeline(Config config);

  /// Frames must arrive with strictly increasing frame_id and timestamp.
  GuidanceDecision process_frame(const perception::PerceptionFrame & frame, double decode_ms = 0.0);

  const Config & config() const { return config_; }
  const tracking::TrackSet & tracks() const { return tracks_; }
  const LatencyStats & latency() const { return stats_; }
  const std::optional<global_planner::NavGraph> & graph() const { return graph_; }
  const std::optional<global_planner::Route> & route() const { return route_; }
  const std::string & current_node() const { return current_node_; }

private:
  double live_speed(double fallback) const;
  void handle_reroute(RerouteOutcome & out, std::vector<std::string> & notes);

  Config config_;
  calibration::CalibrationModel model_;
  tracking::TrackSet tracks_;
  LatencyStats stats_;
  std::optional<global_planner::NavGraph> graph_;
  std::optional<global_planner::Route> route_;
  std::string current_node_;
  std::optional<std::int64_t> last_frame_id_;
  std::optional<perception::BoundingBox> held_vip_;
  std::optional<double> held_vip_distance_;
  int vip_missing_ = 0;
  int reroute_streak_ = 0;
  std::int64_t vip_track_id_ = -1;
};

/// One trace line (without trailing newline). Keys follow a fixed order so
/// identical decisions serialize to identical bytes.
std::string decision_to_json(const GuidanceDecision & decision, bool include_latency = true);

}  // namespace vipguide::pipeline

#endif  // VIPGUIDE__PIPELINE_HPP_
