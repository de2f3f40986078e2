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

#ifndef VIPGUIDE__CONFIG_HPP_
#define VIPGUIDE__CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vipguide/calibration.hpp"
#include "vipguide/geometry.hpp"
#include "vipguide/global_planner.hpp"
#include "vipguide/tracking.hpp"

namespace vipguide::pipeline
{

struct PlannerParams
{
  int n_partitions = 3;
  double width_margin = 1.2;
  double danger_mult = 1.0;
  double warning_mult = 2.0;
  int edge_box_px = 90;
  int edge_threshold = 128;
};

struct PipelineParams
{
  int vip_lost_frames = 30;
  int reroute_hysteresis = 5;
  bool live_speed = true;
  double rate_window_s = 1.0;
};

struct RouteParams
{
  std::optional<global_planner::NavGraph> graph;
  std::string src;
  std::string dst;
};

struct Config
{
  geometry::GeometricConfig geometry;
  PlannerParams planner;
  tracking::TrackerParams tracking;
  PipelineParams pipeline;
  std::optional<calibration::CalibrationModel> calibration;
  RouteParams route;
};

/// Parses the JSON configuration. Relative file references
/// (calibration.model_file, route.graph_file) resolve against `base_dir`.
/// Unknown keys and invalid values raise ConfigError.
Config parse_config(std::string_view json_text, const std::filesystem::path & base_dir = {});
Config load_config(const std::filesystem::path & path);

/// Throws ConfigError on out-of-range parameters.
void validate(const Config & config);

}  // namespace vipguide::pipeline

#endif  // VIPGUIDE__CONFIG_HPP_
