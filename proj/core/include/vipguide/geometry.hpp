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

#ifndef VIPGUIDE__GEOMETRY_HPP_
#define VIPGUIDE__GEOMETRY_HPP_

#include <limits>
#include <string>
#include <vector>

namespace vipguide::geometry
{

/// Drone/VIP geometric parameters. Lengths in meters, times in seconds,
/// angles in degrees.
struct GeometricConfig
{
  double f_deg = 64.0;             ///< vertical camera field of view
  double hfov_deg = 80.0;          ///< horizontal camera field of view
  double h_vip_m = 1.7;            ///< VIP height
  double h_max_m = 2.0;            ///< maximum drone height offset
  double d_min_floor_m = 1.0;
  double d_max_ceiling_m = 10.0;
  double walk_speed_mps = 1.0;
  double t_detect_s = 0.161;       ///< 10 + 27 + 108 + 16 ms of per-frame inference
  double t_react_s = 1.0;
  double buffer_factor = 0.05;
  double perception_range_m = 15.0;
  double visible_fraction = 2.0 / 3.0;
};

/// Throws ConfigError naming the first violated field.
void validate(const GeometricConfig & cfg);

/// Height offset h' = d * tan(f / 2) that keeps the top of the head on the
/// edge of the vertical field of view.
double visibility_offset(double f_deg, double d_m);

/// d' = x * (t_detect + t_react).
double safety_distance(double speed_mps, double t_detect_s, double t_react_s);

/// Forward view the drone needs: d + d' + buffer_factor * d'.
double lookahead(double d_m, double safety_m, double buffer_factor);

/// Smallest standoff at which the top `visible_fraction` of the VIP fits in
/// the field of view from height offset `h_offset_m`, floored at d_min_floor.
double min_distance_for_visibility(double h_offset_m, const GeometricConfig & cfg);

/// Admissible segment of (height offset, standoff) poses.
struct PoseEnvelope
{
  double near_h_m = 0.0;  ///< h_max
  double near_d_m = 0.0;  ///< d_min
  double far_h_m = 0.0;   ///< h_vip
  double far_d_m = 0.0;   ///< d_max

  double d_min() const { return near_d_m; }
  double d_max() const { return far_d_m; }
};

/// Throws ConfigError when d_min > d_max.
PoseEnvelope pose_envelope(const GeometricConfig & cfg);

enum class ViolationKind
{
  head_not_visible,
  below_floor,
  below_envelope,
  above_ceiling,
  above_envelope,
  offset_below_vip_height,
  offset_above_max,
  envelope_infeasible,
};

struct Violation
{
  ViolationKind kind;
  std::string message;
};

/// Empty result means the pose is admissible.
std::vector<Violation> validate_pose(double h_offset_m, double d_m, const GeometricConfig & cfg);

double deg_to_rad(double deg);

}  // namespace vipguide::geometry

#endif  // VIPGUIDE__GEOMETRY_HPP_
